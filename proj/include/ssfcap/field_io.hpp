#pragma once

// Binary field dump: 8-byte magic "SSFFIELD", uint64 L (little-endian), then
// 2L little-endian IEEE-754 doubles, real and imaginary parts interleaved.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "ssf_channel.hpp"

namespace ssfcap {

inline constexpr std::array<char, 8> kFieldMagic{'S', 'S', 'F', 'F', 'I', 'E', 'L', 'D'};

namespace detail {

inline void put_u64_le(std::ostream& out, std::uint64_t v)
{
    std::array<char, 8> b{};
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(b.data(), 8);
}

inline std::uint64_t get_u64_le(std::istream& in)
{
    std::array<unsigned char, 8> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), 8)) throw std::runtime_error("truncated field dump");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

} // namespace detail

inline void write_field(std::ostream& out, const ComplexField& a)
{
    out.write(kFieldMagic.data(), kFieldMagic.size());
    detail::put_u64_le(out, a.size());
    for (const auto& v : a) {
        detail::put_u64_le(out, std::bit_cast<std::uint64_t>(v.real()));
        detail::put_u64_le(out, std::bit_cast<std::uint64_t>(v.imag()));
    }
    if (!out) throw std::runtime_error("failed writing field dump");
}

inline ComplexField read_field(std::istream& in)
{
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kFieldMagic)
        throw std::runtime_error("not a field dump (bad magic)");
    const std::uint64_t n = detail::get_u64_le(in);
    if (n > (std::uint64_t{1} << 32)) throw std::runtime_error("field dump length out of range");
    ComplexField a(static_cast<std::size_t>(n));
    for (auto& v : a) {
        const double re = std::bit_cast<double>(detail::get_u64_le(in));
        const double im = std::bit_cast<double>(detail::get_u64_le(in));
        v = {re, im};
    }
    return a;
}

} // namespace ssfcap
