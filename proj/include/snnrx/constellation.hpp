#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "snnrx/rng.hpp"

namespace snnrx::chan {

using cplx = std::complex<double>;

// Symbol constellation with a Gray bit mapping. Real alphabets (BPSK, PAM4)
// use a zero imaginary part. points[i] is the symbol with label index i
// (0-based internally); gray labels are stored as the bit tuple per point.
struct Constellation {
    std::vector<cplx> points;
    std::vector<std::vector<uint8_t>> bit_map;  // bit_map[i] = bits of points[i]

    std::size_t size() const { return points.size(); }
    std::size_t bits_per_symbol() const;

    void validate() const;

    static Constellation bpsk();
    static Constellation qam16();
    // Gray-mapped 4-level real alphabet with the given levels (ascending).
    static Constellation pam4(const std::vector<double>& levels);
};

// Gray bit tuple -> symbol index / symbol. Throws on wrong bit count.
std::size_t map_bits_index(const std::vector<uint8_t>& bits, const Constellation& c);
cplx map_bits(const std::vector<uint8_t>& bits, const Constellation& c);

// Inverse of map_bits; index is the 0-based constellation index.
const std::vector<uint8_t>& demap(std::size_t index, const Constellation& c);

// Minimum-distance (= AWGN maximum likelihood) detection; ties resolve to
// the lowest constellation index. Returns the 0-based index.
std::size_t ml_detect(cplx y, const Constellation& c);

// y = x + n with circularly-symmetric complex Gaussian noise of total
// variance sigma2, split equally across real and imaginary parts.
std::vector<cplx> awgn_transmit(const std::vector<cplx>& symbols, double sigma2,
                                RandomStream& rng);

}  // namespace snnrx::chan
