#pragma once

#include <memory>
#include <string>
#include <vector>

#include "iwalab/iwasawa_module.hpp"
#include "iwalab/poly_matrix.hpp"

namespace iwalab {

/// A finite p-group given by its Cayley table. table[g][h] = g*h. Validated
/// exhaustively at construction; order is capped at 64 so the triple loop
/// stays trivial.
struct PGroup {
    size_t order = 1;
    std::vector<std::vector<size_t>> table{{0}};
    size_t identityIndex = 0;

    size_t mul(size_t g, size_t h) const { return table[g][h]; }
    size_t inverse(size_t g) const;
    bool isTrivial() const { return order == 1; }
};

using GroupPtr = std::shared_ptr<const PGroup>;

/// Validate a Cayley table as a p-group for the given prime.
/// Errors: NoIdentity, NotAssociative, NotInvertible, NotPPower.
GroupPtr validateGroup(const std::vector<std::vector<size_t>>& table, uint64_t p);

GroupPtr trivialGroup();
GroupPtr cyclicGroup(size_t n, uint64_t p);
GroupPtr productGroup(const GroupPtr& a, const GroupPtr& b, uint64_t p);

/// Parse names like "Z/3", "Z/9", "Z/3xZ/3", "D8".
GroupPtr namedGroup(const std::string& name, uint64_t p);

/// An element of Lambda[G]: one series coefficient per group element.
struct GroupRingElement {
    std::vector<IwasawaElement> coeffs; // indexed by group element

    static GroupRingElement zero(const GroupPtr& g, const CtxPtr& ctx);
    static GroupRingElement scalar(const GroupPtr& g, IwasawaElement value);
    static GroupRingElement groupGenerator(const GroupPtr& g, const CtxPtr& ctx, size_t index);

    bool isZero() const;
    bool allExact() const;
    GroupRingElement add(const GroupRingElement& other) const;
    GroupRingElement sub(const GroupRingElement& other) const;
    GroupRingElement negated() const;

    /// Sum of coefficients: the augmentation g -> 1.
    IwasawaElement augment() const;
};

/// Matrix over Lambda[G], row-major; boundary maps and module presentations.
struct GroupRingMatrix {
    size_t rows = 0, cols = 0;
    GroupPtr group;
    CtxPtr ctx;
    std::vector<GroupRingElement> entries;

    GroupRingMatrix() = default;
    GroupRingMatrix(size_t r, size_t c, GroupPtr g, CtxPtr cx);

    GroupRingElement& at(size_t r, size_t c) { return entries[r * cols + c]; }
    const GroupRingElement& at(size_t r, size_t c) const { return entries[r * cols + c]; }

    GroupRingElement mulElements(const GroupRingElement& a, const GroupRingElement& b) const;
    GroupRingMatrix mul(const GroupRingMatrix& other) const;
    GroupRingMatrix sub(const GroupRingMatrix& other) const;
    bool isZero() const;
    bool allEntriesExact() const;
};

/// The left-regular-representation expansion Lambda[G] -> Mat_{|G|}(Lambda),
/// applied blockwise: a (rows*|G|) x (cols*|G|) matrix over Lambda. It is a
/// ring homomorphism, so Lambda-module invariants can be computed after
/// forgetting the G-action.
PolyMatrix regularExpand(const GroupRingMatrix& a);

/// Entrywise augmentation: the base change Lambda tensor_{Lambda[G]} (-) on
/// matrices between free modules.
PolyMatrix augmentMatrix(const GroupRingMatrix& a);

/// Coinvariants of the Lambda[G]-module presented by `presentation`:
/// generator count is unchanged, relations are augmented entrywise. Exact
/// for presentations because the tensor is right exact.
LambdaModule coinvariantsPresentation(const GroupRingMatrix& presentation);

/// The Lambda-module underlying the presentation after forgetting the
/// G-action: the regular expansion as a presentation on |G| times as many
/// generators.
LambdaModule forgetGroupAction(const GroupRingMatrix& presentation);

} // namespace iwalab
