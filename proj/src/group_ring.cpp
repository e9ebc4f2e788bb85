#include "iwalab/group_ring.hpp"

#include <algorithm>

namespace iwalab {

size_t PGroup::inverse(size_t g) const {
    for (size_t h = 0; h < order; ++h)
        if (table[g][h] == identityIndex) return h;
    fail(ErrorCode::NotInvertible, "element has no inverse");
}

GroupPtr validateGroup(const std::vector<std::vector<size_t>>& table, uint64_t p) {
    const size_t n = table.size();
    if (n == 0 || n > 64)
        fail(ErrorCode::SchemaError, "group order must be between 1 and 64");
    for (const auto& row : table) {
        if (row.size() != n) fail(ErrorCode::SchemaError, "Cayley table is not square");
        for (size_t v : row)
            if (v >= n) fail(ErrorCode::SchemaError, "Cayley table index out of range");
    }

    size_t order = n;
    while (order % p == 0) order /= p;
    if (order != 1)
        fail(ErrorCode::NotPPower,
             "group order " + std::to_string(n) + " is not a power of " + std::to_string(p));

    size_t identity = n;
    for (size_t e = 0; e < n; ++e) {
        bool ok = true;
        for (size_t g = 0; g < n && ok; ++g)
            if (table[e][g] != g || table[g][e] != g) ok = false;
        if (ok) {
            identity = e;
            break;
        }
    }
    if (identity == n) fail(ErrorCode::NoIdentity, "Cayley table has no two-sided identity");

    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b)
            for (size_t c = 0; c < n; ++c)
                if (table[table[a][b]][c] != table[a][table[b][c]])
                    fail(ErrorCode::NotAssociative,
                         "associativity fails at (" + std::to_string(a) + ", " +
                             std::to_string(b) + ", " + std::to_string(c) + ")");

    for (size_t g = 0; g < n; ++g) {
        bool hasInverse = false;
        for (size_t h = 0; h < n && !hasInverse; ++h)
            if (table[g][h] == identity && table[h][g] == identity) hasInverse = true;
        if (!hasInverse)
            fail(ErrorCode::NotInvertible, "element " + std::to_string(g) + " has no inverse");
    }

    auto g = std::make_shared<PGroup>();
    g->order = n;
    g->table = table;
    g->identityIndex = identity;
    return g;
}

GroupPtr trivialGroup() {
    auto g = std::make_shared<PGroup>();
    return g;
}

GroupPtr cyclicGroup(size_t n, uint64_t p) {
    std::vector<std::vector<size_t>> table(n, std::vector<size_t>(n));
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) table[a][b] = (a + b) % n;
    return validateGroup(table, p);
}

GroupPtr productGroup(const GroupPtr& a, const GroupPtr& b, uint64_t p) {
    const size_t n = a->order * b->order;
    std::vector<std::vector<size_t>> table(n, std::vector<size_t>(n));
    auto idx = [&](size_t x, size_t y) { return x * b->order + y; };
    for (size_t x1 = 0; x1 < a->order; ++x1)
        for (size_t y1 = 0; y1 < b->order; ++y1)
            for (size_t x2 = 0; x2 < a->order; ++x2)
                for (size_t y2 = 0; y2 < b->order; ++y2)
                    table[idx(x1, y1)][idx(x2, y2)] = idx(a->mul(x1, x2), b->mul(y1, y2));
    return validateGroup(table, p);
}

GroupPtr namedGroup(const std::string& name, uint64_t p) {
    if (name == "1" || name == "trivial") return trivialGroup();
    if (name == "D8") {
        // Dihedral of order 8: r^4 = s^2 = 1, s r s = r^-1; index = rot + 4*flip.
        std::vector<std::vector<size_t>> table(8, std::vector<size_t>(8));
        for (size_t i = 0; i < 8; ++i)
            for (size_t j = 0; j < 8; ++j) {
                size_t r1 = i % 4, f1 = i / 4, r2 = j % 4, f2 = j / 4;
                size_t rot = f1 ? (r1 + 4 - r2) % 4 : (r1 + r2) % 4;
                table[i][j] = rot + 4 * ((f1 + f2) % 2);
            }
        return validateGroup(table, p);
    }
    // "Z/a" or products "Z/axZ/b..."
    GroupPtr acc;
    size_t pos = 0;
    while (pos < name.size()) {
        if (name.compare(pos, 2, "Z/") != 0)
            fail(ErrorCode::SchemaError, "unknown group name: " + name);
        pos += 2;
        size_t end = pos;
        while (end < name.size() && isdigit(name[end])) ++end;
        if (end == pos) fail(ErrorCode::SchemaError, "unknown group name: " + name);
        size_t n = std::stoul(name.substr(pos, end - pos));
        GroupPtr c = cyclicGroup(n, p);
        acc = acc ? productGroup(acc, c, p) : c;
        pos = end;
        if (pos < name.size()) {
            if (name[pos] != 'x') fail(ErrorCode::SchemaError, "unknown group name: " + name);
            ++pos;
        }
    }
    if (!acc) fail(ErrorCode::SchemaError, "empty group name");
    return acc;
}

GroupRingElement GroupRingElement::zero(const GroupPtr& g, const CtxPtr& ctx) {
    GroupRingElement e;
    e.coeffs.assign(g->order, IwasawaElement::constant(ctx, 0));
    return e;
}

GroupRingElement GroupRingElement::scalar(const GroupPtr& g, IwasawaElement value) {
    GroupRingElement e = zero(g, value.ctx());
    e.coeffs[g->identityIndex] = std::move(value);
    return e;
}

GroupRingElement GroupRingElement::groupGenerator(const GroupPtr& g, const CtxPtr& ctx,
                                                  size_t index) {
    GroupRingElement e = zero(g, ctx);
    e.coeffs.at(index) = IwasawaElement::constant(ctx, 1);
    return e;
}

bool GroupRingElement::isZero() const {
    for (const auto& c : coeffs)
        if (!c.isZero()) return false;
    return true;
}

bool GroupRingElement::allExact() const {
    for (const auto& c : coeffs)
        if (!c.isExact()) return false;
    return true;
}

GroupRingElement GroupRingElement::add(const GroupRingElement& other) const {
    GroupRingElement out = *this;
    for (size_t i = 0; i < coeffs.size(); ++i) out.coeffs[i] = coeffs[i].add(other.coeffs[i]);
    return out;
}

GroupRingElement GroupRingElement::sub(const GroupRingElement& other) const {
    GroupRingElement out = *this;
    for (size_t i = 0; i < coeffs.size(); ++i) out.coeffs[i] = coeffs[i].sub(other.coeffs[i]);
    return out;
}

GroupRingElement GroupRingElement::negated() const {
    GroupRingElement out = *this;
    for (size_t i = 0; i < coeffs.size(); ++i) out.coeffs[i] = coeffs[i].negated();
    return out;
}

IwasawaElement GroupRingElement::augment() const {
    IwasawaElement acc = IwasawaElement::constant(coeffs.front().ctx(), 0);
    for (const auto& c : coeffs) acc = acc.add(c);
    return acc;
}

GroupRingMatrix::GroupRingMatrix(size_t r, size_t c, GroupPtr g, CtxPtr cx)
    : rows(r), cols(c), group(std::move(g)), ctx(std::move(cx)),
      entries(r * c, GroupRingElement::zero(group, ctx)) {}

GroupRingElement GroupRingMatrix::mulElements(const GroupRingElement& a,
                                              const GroupRingElement& b) const {
    GroupRingElement out = GroupRingElement::zero(group, ctx);
    for (size_t g = 0; g < group->order; ++g) {
        if (a.coeffs[g].isZero()) continue;
        for (size_t h = 0; h < group->order; ++h) {
            if (b.coeffs[h].isZero()) continue;
            size_t gh = group->mul(g, h);
            out.coeffs[gh] = out.coeffs[gh].add(a.coeffs[g].mul(b.coeffs[h]));
        }
    }
    return out;
}

GroupRingMatrix GroupRingMatrix::mul(const GroupRingMatrix& other) const {
    if (cols != other.rows) fail(ErrorCode::InternalError, "group-ring product shape mismatch");
    GroupRingMatrix out(rows, other.cols, group, ctx);
    for (size_t i = 0; i < rows; ++i)
        for (size_t k = 0; k < cols; ++k) {
            if (at(i, k).isZero()) continue;
            for (size_t j = 0; j < other.cols; ++j) {
                if (other.at(k, j).isZero()) continue;
                out.at(i, j) = out.at(i, j).add(mulElements(at(i, k), other.at(k, j)));
            }
        }
    return out;
}

GroupRingMatrix GroupRingMatrix::sub(const GroupRingMatrix& other) const {
    GroupRingMatrix out = *this;
    for (size_t i = 0; i < entries.size(); ++i) out.entries[i] = entries[i].sub(other.entries[i]);
    return out;
}

bool GroupRingMatrix::isZero() const {
    for (const auto& e : entries)
        if (!e.isZero()) return false;
    return true;
}

bool GroupRingMatrix::allEntriesExact() const {
    for (const auto& e : entries)
        if (!e.allExact()) return false;
    return true;
}

PolyMatrix regularExpand(const GroupRingMatrix& a) {
    const size_t n = a.group->order;
    PolyMatrix out(a.rows * n, a.cols * n, a.ctx);
    // Left regular representation: x * e_h = sum_g x_g e_{gh}, so block
    // column h carries coefficient x_g at block row g*h.
    for (size_t i = 0; i < a.rows; ++i)
        for (size_t j = 0; j < a.cols; ++j) {
            const GroupRingElement& e = a.at(i, j);
            for (size_t g = 0; g < n; ++g) {
                if (e.coeffs[g].isZero()) continue;
                for (size_t h = 0; h < n; ++h)
                    out.at(i * n + a.group->mul(g, h), j * n + h) = e.coeffs[g];
            }
        }
    return out;
}

PolyMatrix augmentMatrix(const GroupRingMatrix& a) {
    PolyMatrix out(a.rows, a.cols, a.ctx);
    for (size_t i = 0; i < a.rows; ++i)
        for (size_t j = 0; j < a.cols; ++j) out.at(i, j) = a.at(i, j).augment();
    return out;
}

LambdaModule coinvariantsPresentation(const GroupRingMatrix& presentation) {
    return LambdaModule(presentation.rows, augmentMatrix(presentation));
}

LambdaModule forgetGroupAction(const GroupRingMatrix& presentation) {
    return LambdaModule(presentation.rows * presentation.group->order,
                        regularExpand(presentation));
}

} // namespace iwalab
