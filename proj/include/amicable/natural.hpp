#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace amicable {

// Arbitrary precision integer. Non-negative wherever the name Natural is used;
// Integer marks signed contexts (deficits, identity sides).
using Natural = mpz_class;
using Integer = mpz_class;
using Rational = mpq_class;

inline Natural to_natural(std::uint64_t v)
{
    Natural r;
    mpz_import(r.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
    return r;
}

inline bool fits_u64(const Natural& v)
{
    return sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64;
}

// Exact conversion; nullopt when v is negative or wider than 64 bits.
inline std::optional<std::uint64_t> to_u64(const Natural& v)
{
    if (!fits_u64(v)) {
        return std::nullopt;
    }
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, -1, sizeof out, 0, 0, v.get_mpz_t());
    return out;
}

inline std::string to_string(const Natural& v) { return v.get_str(10); }

// Parses a decimal integer (optionally signed). Throws ParseError.
Integer parse_integer(std::string_view text);

// Like parse_integer but also accepts scientific notation with an integral
// value ("1e6", "2.5e3"). Result must be non-negative.
Natural parse_count(std::string_view text);

// 26989290624832 -> "26,989,290,624,832"
std::string with_separators(const Integer& v);

} // namespace amicable
