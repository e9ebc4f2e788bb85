#pragma once
#include "iwalab/complex.hpp"
