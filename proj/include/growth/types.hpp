#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace growth {

// Types are dense indices 0..N-1 with 0 reserved for the passive type.
using TypeId = std::uint8_t;

// Subsets of a type alphabet fit in one machine word; alphabets are capped
// at 32 elements so this always holds.
using TypeSet = std::uint32_t;

inline constexpr int kMaxTypes = 32;
inline constexpr std::size_t kMaxTableEntries = std::size_t{1} << 20;

inline bool setContains(TypeSet s, TypeId a) { return (s >> a) & 1u; }
inline TypeSet setAdd(TypeSet s, TypeId a) { return s | (TypeSet{1} << a); }
inline int setSize(TypeSet s) { return std::popcount(s); }

inline std::vector<TypeId> setElements(TypeSet s) {
    std::vector<TypeId> out;
    while (s) {
        out.push_back(static_cast<TypeId>(std::countr_zero(s)));
        s &= s - 1;
    }
    return out;
}

// Error taxonomy shared across modules. Each carries a stable code so the
// CLI can print machine-readable failures.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

struct ArityMismatch : Error {
    explicit ArityMismatch(const std::string& w) : Error("ArityMismatch", w) {}
};
struct NotAdditive : Error {
    explicit NotAdditive(const std::string& w) : Error("NotAdditive", w) {}
};
struct NotDualType : Error {
    explicit NotDualType(const std::string& w) : Error("NotDualType", w) {}
};
struct NotMultiColour : Error {
    explicit NotMultiColour(const std::string& w) : Error("NotMultiColour", w) {}
};
struct CommutationFailure : Error {
    explicit CommutationFailure(const std::string& w) : Error("CommutationFailure", w) {}
};
struct BoundExceeded : Error {
    explicit BoundExceeded(const std::string& w) : Error("BoundExceeded", w) {}
};
struct PreconditionFailed : Error {
    explicit PreconditionFailed(const std::string& w) : Error("PreconditionFailed", w) {}
};
struct NegativeRate : Error {
    explicit NegativeRate(const std::string& w) : Error("NegativeRate", w) {}
};
struct ModelError : Error {
    explicit ModelError(const std::string& w) : Error("ModelError", w) {}
};

// Validation outcome carrying the first violated rule and its witness.
struct Violation {
    std::string code;            // e.g. PosetViolation, JoinViolation
    std::string detail;
    std::vector<int> witness;    // the offending pair/triple of indices
};

struct Report {
    std::vector<Violation> issues;
    bool ok() const { return issues.empty(); }
    std::string summary() const;
};

}  // namespace growth
