#include "iwalab/io.hpp"
