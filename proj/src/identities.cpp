#include "amicable/identities.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

#include "amicable/arith.hpp"
#include "amicable/errors.hpp"

namespace amicable {
namespace {

constexpr std::array<std::pair<ShapeStatus, std::string_view>, 8> kShapeNames{{
    {ShapeStatus::Shape2x2, "Shape2x2"},
    {ShapeStatus::Shape3x2, "Shape3x2"},
    {ShapeStatus::Shape2x3, "Shape2x3"},
    {ShapeStatus::Shape3x3, "Shape3x3"},
    {ShapeStatus::Shape4x2, "Shape4x2"},
    {ShapeStatus::Shape2x4, "Shape2x4"},
    {ShapeStatus::Shape4x4, "Shape4x4"},
    {ShapeStatus::Unsupported, "Unsupported"},
}};

std::vector<Natural> odd_primes(const Factorization& f)
{
    std::vector<Natural> out;
    for (const auto& pp : f.factors) {
        if (pp.prime != 2) {
            out.push_back(pp.prime);
        }
    }
    return out;
}

bool odd_part_squarefree(const Factorization& f)
{
    return std::all_of(f.factors.begin(), f.factors.end(),
                       [](const PrimePower& pp) { return pp.prime == 2 || pp.exponent == 1; });
}

ShapeStatus status_for_counts(std::size_t j, std::size_t k)
{
    static const std::map<std::pair<std::size_t, std::size_t>, ShapeStatus> table{
        {{2, 2}, ShapeStatus::Shape2x2}, {{3, 2}, ShapeStatus::Shape3x2},
        {{2, 3}, ShapeStatus::Shape2x3}, {{3, 3}, ShapeStatus::Shape3x3},
        {{4, 2}, ShapeStatus::Shape4x2}, {{2, 4}, ShapeStatus::Shape2x4},
        {{4, 4}, ShapeStatus::Shape4x4},
    };
    auto it = table.find({j, k});
    return it == table.end() ? ShapeStatus::Unsupported : it->second;
}

Integer sum(std::span<const Natural> v)
{
    Integer s = 0;
    for (const auto& x : v) {
        s += x;
    }
    return s;
}

Integer product(std::span<const Natural> v)
{
    Integer s = 1;
    for (const auto& x : v) {
        s *= x;
    }
    return s;
}

Equation equation(std::string label, Integer lhs, Integer rhs)
{
    const bool holds = lhs == rhs;
    return {std::move(label), std::move(lhs), std::move(rhs), holds};
}

void require(const PairShape& shape, ShapeStatus wanted, std::string_view what)
{
    if (shape.status == wanted) {
        return;
    }
    std::string msg = std::string(what) + " needs " + std::string(to_string(wanted)) + ", got " +
                      std::string(to_string(shape.status));
    if (!shape.reason.empty()) {
        msg += " (" + shape.reason + ")";
    }
    throw ShapeMismatch(msg);
}

IdentityReport start_report(IdentityKind kind, PairShape shape, Orientation orientation)
{
    IdentityReport report;
    report.kind = kind;
    report.orientation = orientation;
    report.deficits = deficits(shape);
    report.shape = std::move(shape);
    return report;
}

void append_backbone(IdentityReport& report)
{
    for (auto& eq : sigma_backbone(report.shape)) {
        report.equations.push_back(std::move(eq));
    }
}

// Orients (a, b) so the member with more odd primes comes first.
std::pair<PairShape, Orientation> oriented(const Natural& a, const Natural& b, ShapeStatus wanted,
                                           ShapeStatus mirrored)
{
    PairShape shape = classify(a, b);
    if (shape.status == mirrored) {
        return {classify(b, a), Orientation::swapped};
    }
    (void)wanted;
    return {std::move(shape), Orientation::as_stated};
}

std::string offset_text(const char* var, int offset)
{
    return offset == 0 ? std::string(var) : std::string(var) + "-1";
}

// ---- exact rational linear algebra for the hypothesis fit ----

using Matrix = std::vector<std::vector<Rational>>;

// Reduced row echelon form in place; returns pivot column per pivot row.
std::vector<std::size_t> rref(Matrix& m, std::size_t cols)
{
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
        std::size_t sel = row;
        while (sel < m.size() && m[sel][col] == 0) {
            ++sel;
        }
        if (sel == m.size()) {
            continue;
        }
        std::swap(m[row], m[sel]);
        const Rational lead = m[row][col];
        for (auto& v : m[row]) {
            v /= lead;
        }
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col] == 0) {
                continue;
            }
            const Rational factor = m[r][col];
            for (std::size_t c = 0; c < m[r].size(); ++c) {
                m[r][c] -= factor * m[row][c];
            }
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

// Solves rows * c = rhs with free variables set to zero. Returns nullopt if
// the system is inconsistent.
std::optional<std::vector<Rational>> solve(const Matrix& rows, const std::vector<Rational>& rhs,
                                           std::size_t cols)
{
    Matrix aug = rows;
    for (std::size_t i = 0; i < aug.size(); ++i) {
        aug[i].push_back(rhs[i]);
    }
    const auto pivots = rref(aug, cols);
    for (std::size_t r = pivots.size(); r < aug.size(); ++r) {
        if (aug[r][cols] != 0) {
            return std::nullopt;
        }
    }
    std::vector<Rational> out(cols, 0);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        out[pivots[r]] = aug[r][cols];
    }
    return out;
}

std::vector<Rational> least_squares(const Matrix& rows, const std::vector<Rational>& rhs,
                                    std::size_t cols)
{
    Matrix normal(cols, std::vector<Rational>(cols, 0));
    std::vector<Rational> target(cols, 0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t i = 0; i < cols; ++i) {
            target[i] += rows[r][i] * rhs[r];
            for (std::size_t j = 0; j < cols; ++j) {
                normal[i][j] += rows[r][i] * rows[r][j];
            }
        }
    }
    // Normal equations are always consistent.
    return *solve(normal, target, cols);
}

struct Basis {
    std::vector<std::string> names;
    std::vector<Integer> values;
};

Basis hypothesis_basis(const PairShape& shape, char side)
{
    const auto& own = side == 'A' ? shape.left_primes : shape.right_primes;
    const auto& other = side == 'A' ? shape.right_primes : shape.left_primes;
    const char other_side = side == 'A' ? 'B' : 'A';
    const std::size_t k = own.size();
    Basis b;
    // e_0 = 1 would duplicate the constant column, so only indices >= 1 enter.
    for (std::size_t idx : {k - 1, k - 2}) {
        if (k >= 2 && idx >= 1 && idx <= k) {
            b.names.push_back("e" + std::to_string(idx) + "(" + side + ")");
            b.values.push_back(elementary_symmetric(own, idx));
        }
    }
    b.names.push_back(std::string("e1(") + other_side + ")");
    b.values.push_back(sum(other));
    b.names.push_back("1");
    b.values.push_back(1);
    return b;
}

std::pair<std::size_t, std::size_t> counts(const PairShape& s)
{
    return {s.left_primes.size(), s.right_primes.size()};
}

} // namespace

std::string_view to_string(ShapeStatus s)
{
    for (const auto& [value, name] : kShapeNames) {
        if (value == s) {
            return name;
        }
    }
    return "Unsupported";
}

std::optional<ShapeStatus> parse_shape_status(std::string_view s)
{
    for (const auto& [value, name] : kShapeNames) {
        if (name == s) {
            return value;
        }
    }
    return std::nullopt;
}

std::string_view to_string(IdentityKind k)
{
    switch (k) {
    case IdentityKind::T2x2: return "T2x2";
    case IdentityKind::T3x2: return "T3x2";
    case IdentityKind::T3x3: return "T3x3";
    case IdentityKind::C4x2: return "C4x2";
    case IdentityKind::C4x4: return "C4x4";
    case IdentityKind::GeneralHypothesis: return "GeneralHypothesis";
    }
    return "?";
}

std::string_view to_string(Orientation o)
{
    switch (o) {
    case Orientation::as_stated: return "as_stated";
    case Orientation::swapped: return "swapped";
    case Orientation::both: return "both";
    }
    return "?";
}

bool PairShape::eligible() const
{
    return n >= 1 && n == n_second && shared_primes.empty() && squarefree &&
           !left_primes.empty() && !right_primes.empty();
}

PairShape classify(const Natural& first, const Natural& second)
{
    PairShape shape;
    shape.first = first;
    shape.second = second;
    shape.first_factors = factorize(first);
    shape.second_factors = factorize(second);
    shape.n = two_adic_split(first).exponent;
    shape.n_second = two_adic_split(second).exponent;
    shape.left_primes = odd_primes(shape.first_factors);
    shape.right_primes = odd_primes(shape.second_factors);
    std::set_intersection(shape.left_primes.begin(), shape.left_primes.end(),
                          shape.right_primes.begin(), shape.right_primes.end(),
                          std::back_inserter(shape.shared_primes));
    shape.squarefree = odd_part_squarefree(shape.first_factors) &&
                       odd_part_squarefree(shape.second_factors);

    const auto j = shape.left_primes.size();
    const auto k = shape.right_primes.size();
    if (shape.n != shape.n_second) {
        shape.reason = "members carry different powers of two";
    } else if (shape.n == 0) {
        shape.reason = "both members are odd";
    } else if (!shape.shared_primes.empty()) {
        shape.reason = "gcd is not a pure power of two";
    } else if (!shape.squarefree) {
        shape.reason = "odd part is not squarefree";
    } else if (status_for_counts(j, k) == ShapeStatus::Unsupported) {
        shape.reason = "odd prime counts " + std::to_string(j) + "x" + std::to_string(k) +
                       " are not covered";
    } else {
        shape.status = status_for_counts(j, k);
    }
    return shape;
}

Deficits deficits(const PairShape& shape)
{
    if (!shape.eligible()) {
        throw ShapeMismatch("deficits need gcd 2^n (n >= 1) and squarefree odd parts" +
                            (shape.reason.empty() ? std::string() : " (" + shape.reason + ")"));
    }
    Deficits d;
    d.S = phi(shape.first_factors) + phi(shape.second_factors);
    const char sides[] = {'A', 'B'};
    const Integer* members[] = {&shape.first, &shape.second};
    Integer* out[] = {&d.x, &d.y};
    for (int i = 0; i < 2; ++i) {
        const Integer diff = *members[i] - d.S;
        Integer rem;
        mpz_fdiv_r_2exp(rem.get_mpz_t(), diff.get_mpz_t(), shape.n);
        if (rem != 0) {
            throw DivisibilityViolation(sides[i], rem);
        }
        mpz_fdiv_q_2exp(out[i]->get_mpz_t(), diff.get_mpz_t(), shape.n);
    }
    return d;
}

std::vector<Equation> sigma_backbone(const PairShape& shape)
{
    if (!shape.eligible()) {
        throw ShapeMismatch("sigma backbone needs an eligible shape");
    }
    Natural mersenne;
    mpz_ui_pow_ui(mersenne.get_mpz_t(), 2, shape.n + 1);
    mersenne -= 1;
    auto side = [&](const std::vector<Natural>& primes) {
        Integer prod = mersenne;
        for (const auto& p : primes) {
            prod *= p + 1;
        }
        return prod;
    };
    const Integer total = shape.first + shape.second;
    return {equation("(2^(n+1)-1)*prod(p+1 | A) = A+B", side(shape.left_primes), total),
            equation("(2^(n+1)-1)*prod(q+1 | B) = A+B", side(shape.right_primes), total)};
}

bool IdentityReport::all_hold() const
{
    return std::all_of(equations.begin(), equations.end(),
                       [](const Equation& e) { return e.holds; });
}

std::string HypothesisFit::expression() const
{
    std::ostringstream os;
    os << deficit << " =";
    bool first = true;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (coefficients[i] == 0) {
            continue;
        }
        const bool negative = sgn(coefficients[i]) < 0;
        os << (first ? (negative ? " -" : " ") : (negative ? " - " : " + "));
        const Rational mag = abs(coefficients[i]);
        if (basis[i] == "1") {
            os << mag.get_str();
        } else if (mag == 1) {
            os << basis[i];
        } else {
            os << mag.get_str() << '*' << basis[i];
        }
        first = false;
    }
    if (first) {
        os << " 0";
    }
    return os.str();
}

IdentityReport check_theorem_2x2(const Natural& a, const Natural& b)
{
    PairShape shape = classify(a, b);
    require(shape, ShapeStatus::Shape2x2, "check_theorem_2x2");
    IdentityReport r = start_report(IdentityKind::T2x2, std::move(shape), Orientation::as_stated);
    const auto& L = r.shape.left_primes;
    const auto& R = r.shape.right_primes;
    const auto& d = r.deficits;
    r.equations.push_back(equation("a+b = 2^-n(B-S)+1", L[0] + L[1], d.y + 1));
    r.equations.push_back(equation("c+d = 2^-n(A-S)+1", R[0] + R[1], d.x + 1));
    r.equations.push_back(
        equation("(c+1)(d+1) = (a+1)(b+1)", (R[0] + 1) * (R[1] + 1), (L[0] + 1) * (L[1] + 1)));
    append_backbone(r);
    return r;
}

IdentityReport check_theorem_3x2(const Natural& a, const Natural& b)
{
    auto [shape, orientation] = oriented(a, b, ShapeStatus::Shape3x2, ShapeStatus::Shape2x3);
    require(shape, ShapeStatus::Shape3x2, "check_theorem_3x2");
    IdentityReport r = start_report(IdentityKind::T3x2, std::move(shape), orientation);
    const auto& L = r.shape.left_primes;   // a < b < c
    const auto& R = r.shape.right_primes;  // d < e
    const auto& d = r.deficits;
    r.equations.push_back(equation("c(a+b)+ab = 2^-n(B-S)", L[2] * (L[0] + L[1]) + L[0] * L[1], d.y));
    r.equations.push_back(equation("(d+e)-(a+b+c) = 2^-n(A-S)", sum(R) - sum(L), d.x));
    append_backbone(r);
    return r;
}

IdentityReport check_theorem_3x3(const Natural& a, const Natural& b)
{
    PairShape shape = classify(a, b);
    require(shape, ShapeStatus::Shape3x3, "check_theorem_3x3");
    IdentityReport r = start_report(IdentityKind::T3x3, std::move(shape), Orientation::as_stated);
    const auto& L = r.shape.left_primes;   // a < b < c
    const auto& R = r.shape.right_primes;  // d < e < f
    const auto& d = r.deficits;
    const Integer qa = L[2] * (L[0] + L[1]) + L[0] * L[1];
    const Integer qb = R[2] * (R[0] + R[1]) + R[0] * R[1];
    r.equations.push_back(equation("2^-n(A-S)-1 = f(d+e)+de-(a+b+c)", d.x - 1, qb - sum(L)));
    r.equations.push_back(equation("2^-n(B-S)-1 = c(a+b)+ab-(d+e+f)", d.y - 1, qa - sum(R)));
    r.equations.push_back(equation("D_P+D_Q+D_S = 0",
                                   (product(L) - product(R)) + (qa - qb) + (sum(L) - sum(R)), 0));
    append_backbone(r);
    return r;
}

IdentityReport check_conjecture_4x2(const Natural& a, const Natural& b)
{
    auto [shape, orientation] = oriented(a, b, ShapeStatus::Shape4x2, ShapeStatus::Shape2x4);
    require(shape, ShapeStatus::Shape4x2, "check_conjecture_4x2");
    IdentityReport r = start_report(IdentityKind::C4x2, std::move(shape), orientation);
    const auto& L = r.shape.left_primes;   // a < b < c < d
    const auto& R = r.shape.right_primes;  // e < f
    const Integer y_rhs = sum(R) - sum(L);
    const Integer x_rhs = elementary_symmetric(L, 3) + elementary_symmetric(L, 2);
    for (bool swapped : {false, true}) {
        const Integer& x = swapped ? r.deficits.y : r.deficits.x;
        const Integer& y = swapped ? r.deficits.x : r.deficits.y;
        for (int offset : {0, 1}) {
            const std::string tag = std::string("[binding=") + (swapped ? "swapped" : "direct") +
                                    " offset=" + (offset ? "-1" : "0") + "] ";
            Equation ey = equation(tag + offset_text("y", offset) + " = (e+f)-(a+b+c+d)",
                                   y - offset, y_rhs);
            Equation ex = equation(tag + offset_text("x", offset) +
                                       " = (abc+abd+acd+bcd)+(ab+ac+ad+bc+bd+cd)",
                                   x - offset, x_rhs);
            r.variants.push_back({tag.substr(1, tag.size() - 3), ey.holds && ex.holds});
            r.equations.push_back(std::move(ey));
            r.equations.push_back(std::move(ex));
        }
    }
    return r;
}

IdentityReport check_conjecture_4x4(const Natural& a, const Natural& b)
{
    PairShape shape = classify(a, b);
    require(shape, ShapeStatus::Shape4x4, "check_conjecture_4x4");
    IdentityReport r = start_report(IdentityKind::C4x4, std::move(shape), Orientation::as_stated);
    const auto& L = r.shape.left_primes;   // a < b < c < d
    const auto& R = r.shape.right_primes;  // e < f < g < h
    const Integer bracket_a = L[0] * L[1] * (L[2] + L[3]) + L[2] * L[3];
    const Integer bracket_b = R[0] * R[1] * (R[2] + R[3]) + R[2] * R[3];
    const Integer e2_a = elementary_symmetric(L, 2);
    const Integer e2_b = elementary_symmetric(R, 2);
    for (bool full_e2 : {false, true}) {
        const Integer& qa = full_e2 ? e2_a : bracket_a;
        const Integer& qb = full_e2 ? e2_b : bracket_b;
        const std::string qa_text = full_e2 ? "e2(a,b,c,d)" : "[ab(c+d)+cd]";
        const std::string qb_text = full_e2 ? "e2(e,f,g,h)" : "[ef(g+h)+gh]";
        for (bool swapped : {false, true}) {
            const Integer& x = swapped ? r.deficits.y : r.deficits.x;
            const Integer& y = swapped ? r.deficits.x : r.deficits.y;
            for (int offset : {0, 1}) {
                const std::string tag = std::string("[reading=") + (full_e2 ? "e2" : "bracket") +
                                        " binding=" + (swapped ? "swapped" : "direct") +
                                        " offset=" + (offset ? "-1" : "0") + "] ";
                Equation ey = equation(tag + offset_text("y", offset) + " = " + qb_text +
                                           " - (a+b+c+d)",
                                       y - offset, qb - sum(L));
                Equation ex = equation(tag + offset_text("x", offset) + " = " + qa_text +
                                           " - (e+f+g+h)",
                                       x - offset, qa - sum(R));
                r.variants.push_back({tag.substr(1, tag.size() - 3), ey.holds && ex.holds});
                r.equations.push_back(std::move(ey));
                r.equations.push_back(std::move(ex));
            }
        }
    }
    return r;
}

IdentityReport check_matching_theorem(const Natural& a, const Natural& b)
{
    const PairShape shape = classify(a, b);
    switch (shape.status) {
    case ShapeStatus::Shape2x2: return check_theorem_2x2(a, b);
    case ShapeStatus::Shape3x2:
    case ShapeStatus::Shape2x3: return check_theorem_3x2(a, b);
    case ShapeStatus::Shape3x3: return check_theorem_3x3(a, b);
    default: break;
    }
    throw ShapeMismatch("no theorem covers " + std::string(to_string(shape.status)) +
                        (shape.reason.empty() ? std::string() : " (" + shape.reason + ")"));
}

IdentityReport general_hypothesis_report(const Natural& a, const Natural& b,
                                         std::span<const PairRecord> catalog)
{
    PairShape shape = classify(a, b);
    if (!shape.eligible()) {
        throw ShapeMismatch("general hypothesis needs gcd 2^n and squarefree odd parts" +
                            (shape.reason.empty() ? std::string() : " (" + shape.reason + ")"));
    }
    const auto want = counts(shape);
    if (want.first > 8 || want.second > 8) {
        throw ShapeMismatch("general hypothesis handles at most 8 odd primes per member");
    }

    std::vector<PairShape> family;
    for (const auto& rec : catalog) {
        PairShape s = classify(rec.smaller, rec.larger);
        if (!s.eligible()) {
            continue;
        }
        if (counts(s) != want) {
            if (std::pair(counts(s).second, counts(s).first) != want) {
                continue;
            }
            s = classify(rec.larger, rec.smaller);
        }
        const bool seen = std::any_of(family.begin(), family.end(), [&](const PairShape& f) {
            return f.first == s.first && f.second == s.second;
        });
        if (!seen) {
            family.push_back(std::move(s));
        }
    }
    if (family.size() < kMinHypothesisFamily) {
        throw InsufficientData("general hypothesis needs at least " +
                               std::to_string(kMinHypothesisFamily) + " catalog pairs of shape " +
                               std::to_string(want.first) + "x" + std::to_string(want.second) +
                               ", found " + std::to_string(family.size()));
    }

    IdentityReport report = start_report(IdentityKind::GeneralHypothesis, std::move(shape),
                                         Orientation::as_stated);
    report.family_size = family.size();
    std::vector<Deficits> family_deficits;
    family_deficits.reserve(family.size());
    for (const auto& s : family) {
        family_deficits.push_back(deficits(s));
    }

    for (char which : {'x', 'y'}) {
        for (char side : {'A', 'B'}) {
            HypothesisFit fit;
            fit.deficit = which;
            fit.basis_side = side;
            Matrix rows;
            std::vector<Rational> rhs;
            std::size_t cols = 0;
            for (std::size_t i = 0; i < family.size(); ++i) {
                Basis basis = hypothesis_basis(family[i], side);
                cols = basis.values.size();
                fit.basis = basis.names;
                std::vector<Rational> row;
                for (auto& v : basis.values) {
                    row.emplace_back(v);
                }
                rows.push_back(std::move(row));
                rhs.emplace_back(which == 'x' ? family_deficits[i].x : family_deficits[i].y);
            }
            auto exact = solve(rows, rhs, cols);
            fit.exact = exact.has_value();
            fit.coefficients = exact ? *exact : least_squares(rows, rhs, cols);
            fit.integral = std::all_of(fit.coefficients.begin(), fit.coefficients.end(),
                                       [](const Rational& q) { return q.get_den() == 1; });
            const Basis query = hypothesis_basis(report.shape, side);
            fit.predicted = 0;
            for (std::size_t i = 0; i < cols; ++i) {
                fit.predicted += fit.coefficients[i] * Rational(query.values[i]);
            }
            fit.predicted.canonicalize();
            fit.observed = which == 'x' ? report.deficits.x : report.deficits.y;
            fit.residual = Rational(fit.observed) - fit.predicted;
            fit.residual.canonicalize();

            Integer rhs_value = fit.predicted.get_num() / fit.predicted.get_den();
            Equation eq = equation(fit.expression() + " [basis " + side + ", " +
                                       std::to_string(family.size()) + " pairs]",
                                   fit.observed, rhs_value);
            eq.holds = fit.fits();
            report.equations.push_back(std::move(eq));
            report.fits.push_back(std::move(fit));
        }
    }
    return report;
}

} // namespace amicable
