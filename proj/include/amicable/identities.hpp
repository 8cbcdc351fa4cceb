#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amicable/arith.hpp"
#include "amicable/natural.hpp"
#include "amicable/pair_record.hpp"

namespace amicable {

enum class ShapeStatus { Shape2x2, Shape3x2, Shape2x3, Shape3x3, Shape4x2, Shape2x4, Shape4x4, Unsupported };

std::string_view to_string(ShapeStatus s);
std::optional<ShapeStatus> parse_shape_status(std::string_view s);

// Odd-prime structure of a pair (A, B) = (first, second) whose members
// share the factor 2^n.
struct PairShape {
    Natural first;
    Natural second;
    unsigned n = 0;                        // 2-adic valuation of first
    unsigned n_second = 0;                 // 2-adic valuation of second
    std::vector<Natural> left_primes;      // distinct odd primes of first, ascending
    std::vector<Natural> right_primes;     // distinct odd primes of second, ascending
    std::vector<Natural> shared_primes;    // odd primes dividing both members
    bool squarefree = false;               // both odd parts squarefree
    ShapeStatus status = ShapeStatus::Unsupported;
    std::string reason;                    // empty unless status is Unsupported
    Factorization first_factors;
    Factorization second_factors;

    // gcd(A, B) = 2^n with n >= 1, odd parts squarefree: the setting every
    // identity and the general hypothesis work in, whatever the prime counts.
    bool eligible() const;
};

PairShape classify(const Natural& first, const Natural& second);
inline PairShape classify(const PairRecord& pair) { return classify(pair.smaller, pair.larger); }

// S = phi(A) + phi(B), A - S = 2^n x, B - S = 2^n y.
struct Deficits {
    Integer S;
    Integer x;
    Integer y;
};

// Throws ShapeMismatch when !shape.eligible(), DivisibilityViolation when
// 2^n does not divide A - S or B - S.
Deficits deficits(const PairShape& shape);

enum class IdentityKind { T2x2, T3x2, T3x3, C4x2, C4x4, GeneralHypothesis };
enum class Orientation { as_stated, swapped, both };

std::string_view to_string(IdentityKind k);
std::string_view to_string(Orientation o);

struct Equation {
    std::string label;
    Integer lhs;
    Integer rhs;
    bool holds = false;
};

// Conjecture variant: a binding/offset/reading combination and whether
// all of its equations hold.
struct Variant {
    std::string label;
    bool holds = false;
};

// deficit ~ sum(coefficients[i] * basis[i]) fitted over a shape family.
struct HypothesisFit {
    char deficit = 'x';          // 'x' = A-side deficit, 'y' = B-side
    char basis_side = 'A';       // side whose e_{k-1}, e_{k-2} are used
    std::vector<std::string> basis;
    std::vector<Rational> coefficients;
    bool exact = false;          // reproduces every family member
    bool integral = false;       // all coefficients are integers
    Integer observed;            // the deficit of the queried pair
    Rational predicted;
    Rational residual;           // observed - predicted

    bool fits() const { return exact && integral && residual == 0; }
    std::string expression() const;
};

struct IdentityReport {
    IdentityKind kind = IdentityKind::T2x2;
    Orientation orientation = Orientation::as_stated;
    PairShape shape;             // A = shape.first, B = shape.second
    Deficits deficits;
    std::vector<Equation> equations;
    std::vector<Variant> variants;
    std::vector<HypothesisFit> fits;
    std::size_t family_size = 0;

    bool all_hold() const;
};

// (2^(n+1) - 1) * prod(p + 1) = A + B for each member: the sigma equality
// behind every identity. Requires shape.eligible().
std::vector<Equation> sigma_backbone(const PairShape& shape);

IdentityReport check_theorem_2x2(const Natural& a, const Natural& b);
IdentityReport check_theorem_3x2(const Natural& a, const Natural& b);
IdentityReport check_theorem_3x3(const Natural& a, const Natural& b);
IdentityReport check_conjecture_4x2(const Natural& a, const Natural& b);
IdentityReport check_conjecture_4x4(const Natural& a, const Natural& b);

// Dispatches on the shape; ShapeMismatch when no theorem covers it.
IdentityReport check_matching_theorem(const Natural& a, const Natural& b);

// Fits each deficit against e_{k-1}, e_{k-2} of one side, e_1 of the other
// side and a constant, exactly, over the catalog pairs with the same prime
// counts. Throws InsufficientData when that family has fewer than 5 pairs.
IdentityReport general_hypothesis_report(const Natural& a, const Natural& b,
                                         std::span<const PairRecord> catalog);

inline constexpr std::size_t kMinHypothesisFamily = 5;

} // namespace amicable
