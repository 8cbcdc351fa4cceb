#include <cctype>

#include "amicable/errors.hpp"
#include "amicable/natural.hpp"

namespace amicable {

Integer parse_integer(std::string_view text)
{
    std::string_view digits = text;
    bool negative = false;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
        negative = digits.front() == '-';
        digits.remove_prefix(1);
    }
    if (digits.empty()) {
        throw ParseError("expected an integer, got '" + std::string(text) + "'");
    }
    for (char ch : digits) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) {
            throw ParseError("expected an integer, got '" + std::string(text) + "'");
        }
    }
    Integer out(std::string(digits), 10);
    return negative ? Integer(-out) : out;
}

Natural parse_count(std::string_view text)
{
    const auto e = text.find_first_of("eE");
    if (e == std::string_view::npos) {
        Integer v = parse_integer(text);
        if (sgn(v) < 0) {
            throw ParseError("expected a non-negative value, got '" + std::string(text) + "'");
        }
        return v;
    }
    std::string_view mantissa = text.substr(0, e);
    const Integer exponent = parse_integer(text.substr(e + 1));
    if (sgn(exponent) < 0 || exponent > 1000) {
        throw ParseError("unsupported exponent in '" + std::string(text) + "'");
    }
    std::string_view whole = mantissa;
    std::string_view fraction;
    if (const auto dot = mantissa.find('.'); dot != std::string_view::npos) {
        whole = mantissa.substr(0, dot);
        fraction = mantissa.substr(dot + 1);
    }
    std::string joined = std::string(whole) + std::string(fraction);
    if (joined.empty() || joined.front() == '-') {
        throw ParseError("expected a non-negative value, got '" + std::string(text) + "'");
    }
    Integer value = parse_integer(joined);
    const long shift = exponent.get_si() - static_cast<long>(fraction.size());
    Integer scale;
    if (shift >= 0) {
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift));
        return value * scale;
    }
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(-shift));
    if (!mpz_divisible_p(value.get_mpz_t(), scale.get_mpz_t())) {
        throw ParseError("'" + std::string(text) + "' is not an integer");
    }
    return value / scale;
}

std::string with_separators(const Integer& v)
{
    std::string digits = Integer(abs(v)).get_str();
    std::string out;
    out.reserve(digits.size() + digits.size() / 3 + 1);
    const std::size_t lead = digits.size() % 3;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i != 0 && (i % 3) == lead % 3) {
            out.push_back(',');
        }
        out.push_back(digits[i]);
    }
    return sgn(v) < 0 ? "-" + out : out;
}

} // namespace amicable
