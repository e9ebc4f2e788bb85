#include <doctest.h>

#include "iwalab/residue_matrix.hpp"

using namespace iwalab;

namespace {

// Brute-force kernel count: try every column vector in (Z/p^N)^cols.
long bruteLogKernel(const ResidueMatrix& a) {
    const PrecisionContext& cx = *a.ctx();
    uint64_t q = cx.modulus();
    uint64_t total = 1;
    for (size_t i = 0; i < a.cols(); ++i) total *= q;
    long count = 0;
    std::vector<uint64_t> x(a.cols(), 0);
    for (uint64_t code = 0; code < total; ++code) {
        uint64_t c = code;
        for (size_t i = 0; i < a.cols(); ++i) {
            x[i] = c % q;
            c /= q;
        }
        bool zero = true;
        for (size_t r = 0; r < a.rows() && zero; ++r) {
            uint64_t acc = 0;
            for (size_t j = 0; j < a.cols(); ++j) acc = cx.add(acc, cx.mul(a.at(r, j), x[j]));
            if (acc) zero = false;
        }
        if (zero) ++count;
    }
    long lg = 0;
    while (count > 1) {
        CHECK(count % long(cx.p()) == 0);
        count /= long(cx.p());
        ++lg;
    }
    return lg;
}

uint64_t rngState = 12345;
uint64_t rnd() {
    uint64_t z = (rngState += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

TEST_CASE("context validates inputs") {
    CHECK_THROWS_AS(makeContext(4, 2, 2), Error);
    CHECK_THROWS_AS(makeContext(3, 0, 2), Error);
    CHECK_NOTHROW(makeContext(2, 8, 32));
    // p^N must stay under 2^63
    CHECK_THROWS_AS(makeContext(3, 50, 4), Error);
}

TEST_CASE("valuation and unit inversion") {
    auto ctx = makeContext(3, 8, 4);
    CHECK(*valuation(Residue(18, ctx)) == 2);
    CHECK(*valuation(Residue(1, ctx)) == 0);
    CHECK_FALSE(valuation(Residue(0, ctx)).has_value());

    auto c2 = makeContext(3, 2, 4);
    CHECK(invertUnit(Residue(2, c2)).value == 5); // 2*5 = 10 = 1 mod 9
    CHECK(invertUnit(Residue(1, makeContext(3, 1, 4))).value == 1);
    CHECK_THROWS_AS(invertUnit(Residue(3, c2)), Error);

    for (int i = 0; i < 200; ++i) {
        auto cx = makeContext(i % 2 ? 3 : 5, 1 + i % 7, 4);
        uint64_t v = rnd() % cx->modulus();
        if (!cx->isUnit(v)) continue;
        CHECK(cx->mul(v, cx->invertUnit(v)) == 1 % cx->modulus());
    }
}

TEST_CASE("howell form sizes: frozen examples") {
    auto ctx = makeContext(3, 2, 4);
    {
        ResidueMatrix a(1, 1, ctx);
        a.at(0, 0) = 3;
        HowellResult h = howellForm(a);
        CHECK(h.logImageSize == 1);
        CHECK(h.logKernelSize == 1);
    }
    {
        auto c3 = makeContext(3, 3, 4);
        ResidueMatrix a(2, 2, c3);
        a.at(0, 0) = 1;
        a.at(1, 1) = 1;
        HowellResult h = howellForm(a);
        CHECK(h.logImageSize == 6);
        CHECK(h.logKernelSize == 0);
    }
    {
        // [[3,0],[0,9]] over Z/9: image size 3, kernel 27.
        ResidueMatrix a(2, 2, ctx);
        a.at(0, 0) = 3;
        a.at(1, 1) = 9 % 9;
        HowellResult h = howellForm(a);
        CHECK(h.logImageSize == 1);
        CHECK(h.logKernelSize == 3);
        CHECK(bruteLogKernel(a) == 3);
    }
}

TEST_CASE("howell kernel+image identity and brute force agreement") {
    for (int trial = 0; trial < 150; ++trial) {
        uint64_t p = trial % 2 ? 2 : 3;
        unsigned n = 1 + trial % 2;
        size_t rows = 1 + rnd() % 3, cols = 1 + rnd() % 3;
        auto ctx = makeContext(p, n, 4);
        // keep brute force under 2^16 vectors
        double bits = double(cols) * n * (p == 2 ? 1.0 : 1.585);
        if (bits > 16) continue;
        ResidueMatrix a(rows, cols, ctx);
        for (size_t i = 0; i < rows; ++i)
            for (size_t j = 0; j < cols; ++j) a.at(i, j) = rnd() % ctx->modulus();
        HowellResult h = howellForm(a);
        CHECK(h.logKernelSize + h.logImageSize == long(cols) * long(n));
        CHECK(h.logKernelSize == bruteLogKernel(a));
    }
}

TEST_CASE("howell form is idempotent and canonical") {
    for (int trial = 0; trial < 100; ++trial) {
        auto ctx = makeContext(3, 3, 4);
        size_t rows = 1 + rnd() % 4, cols = 1 + rnd() % 4;
        ResidueMatrix a(rows, cols, ctx);
        for (size_t i = 0; i < rows; ++i)
            for (size_t j = 0; j < cols; ++j) a.at(i, j) = rnd() % ctx->modulus();
        HowellResult h1 = howellForm(a);
        HowellResult h2 = howellForm(h1.form);
        CHECK(h1.form == h2.form);
        CHECK(h1.logImageSize == h2.logImageSize);
    }
}

TEST_CASE("smith valuations match howell image sizes") {
    for (int trial = 0; trial < 100; ++trial) {
        auto ctx = makeContext(trial % 2 ? 2 : 5, 3, 4);
        size_t rows = 1 + rnd() % 4, cols = 1 + rnd() % 4;
        ResidueMatrix a(rows, cols, ctx);
        for (size_t i = 0; i < rows; ++i)
            for (size_t j = 0; j < cols; ++j) a.at(i, j) = rnd() % ctx->modulus();
        std::vector<unsigned> divs = smithValuations(a);
        long logIm = 0;
        for (unsigned v : divs) logIm += long(ctx->coeffPrecision()) - long(v);
        CHECK(howellForm(a).logImageSize == logIm);
    }
}

TEST_CASE("row echelon solver finds exact solutions") {
    for (int trial = 0; trial < 200; ++trial) {
        auto ctx = makeContext(3, 4, 4);
        size_t rows = 1 + rnd() % 4, cols = 1 + rnd() % 4;
        ResidueMatrix a(rows, cols, ctx);
        for (size_t i = 0; i < rows; ++i)
            for (size_t j = 0; j < cols; ++j) a.at(i, j) = rnd() % ctx->modulus();
        // Build a consistent rhs from a random x.
        std::vector<uint64_t> x0(cols);
        for (auto& v : x0) v = rnd() % ctx->modulus();
        std::vector<uint64_t> b(rows, 0);
        for (size_t i = 0; i < rows; ++i)
            for (size_t j = 0; j < cols; ++j)
                b[i] = ctx->add(b[i], ctx->mul(a.at(i, j), x0[j]));
        RowEchelonSolver solver(a);
        auto x = solver.solve(b);
        REQUIRE(x.has_value());
        for (size_t i = 0; i < rows; ++i) {
            uint64_t acc = 0;
            for (size_t j = 0; j < cols; ++j) acc = ctx->add(acc, ctx->mul(a.at(i, j), (*x)[j]));
            CHECK(acc == b[i]);
        }
    }
}
