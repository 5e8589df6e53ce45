#include "snnrx/constellation.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "snnrx/encoders.hpp"

namespace snnrx::chan {

std::size_t Constellation::bits_per_symbol() const {
    std::size_t n = 0;
    while ((1u << n) < size()) ++n;
    return n;
}

void Constellation::validate() const {
    if (size() == 0 || (size() & (size() - 1)) != 0)
        throw std::invalid_argument("Constellation: size must be a power of two");
    if (bit_map.size() != size())
        throw std::invalid_argument("Constellation: bit map size mismatch");
    std::map<std::vector<uint8_t>, int> seen;
    for (const auto& b : bit_map) {
        if (b.size() != bits_per_symbol())
            throw std::invalid_argument("Constellation: bit tuple width mismatch");
        if (++seen[b] > 1) throw std::invalid_argument("Constellation: bit map not bijective");
    }
}

Constellation Constellation::bpsk() {
    Constellation c;
    c.points = {cplx(1.0, 0.0), cplx(-1.0, 0.0)};  // x = (-1)^b
    c.bit_map = {{0}, {1}};
    return c;
}

namespace {

std::vector<uint8_t> gray_bits2(unsigned level) {
    const unsigned g = codec::gray_encode(level);
    return {static_cast<uint8_t>((g >> 1) & 1u), static_cast<uint8_t>(g & 1u)};
}

}  // namespace

Constellation Constellation::qam16() {
    const double c0 = std::sqrt(10.0) / 10.0;
    const double levels[4] = {-3.0, -1.0, 1.0, 3.0};
    Constellation c;
    for (unsigned li = 0; li < 4; ++li) {
        for (unsigned lq = 0; lq < 4; ++lq) {
            c.points.emplace_back(levels[li] * c0, levels[lq] * c0);
            auto bi = gray_bits2(li);
            auto bq = gray_bits2(lq);
            bi.insert(bi.end(), bq.begin(), bq.end());
            c.bit_map.push_back(std::move(bi));
        }
    }
    return c;
}

Constellation Constellation::pam4(const std::vector<double>& levels) {
    if (levels.size() != 4) throw std::invalid_argument("pam4: four levels required");
    Constellation c;
    for (unsigned l = 0; l < 4; ++l) {
        c.points.emplace_back(levels[l], 0.0);
        c.bit_map.push_back(gray_bits2(l));
    }
    return c;
}

std::size_t map_bits_index(const std::vector<uint8_t>& bits, const Constellation& c) {
    if (bits.size() != c.bits_per_symbol())
        throw std::invalid_argument("map_bits: wrong bit count");
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c.bit_map[i] == bits) return i;
    throw std::invalid_argument("map_bits: bit tuple not in map");
}

cplx map_bits(const std::vector<uint8_t>& bits, const Constellation& c) {
    return c.points[map_bits_index(bits, c)];
}

const std::vector<uint8_t>& demap(std::size_t index, const Constellation& c) {
    if (index >= c.size()) throw std::invalid_argument("demap: index out of range");
    return c.bit_map[index];
}

std::size_t ml_detect(cplx y, const Constellation& c) {
    std::size_t best = 0;
    double best_d = std::norm(y - c.points[0]);
    for (std::size_t i = 1; i < c.size(); ++i) {
        const double d = std::norm(y - c.points[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

std::vector<cplx> awgn_transmit(const std::vector<cplx>& symbols, double sigma2,
                                RandomStream& rng) {
    if (sigma2 < 0.0) throw std::invalid_argument("awgn_transmit: sigma2 >= 0 required");
    if (sigma2 == 0.0) return symbols;
    const double s = std::sqrt(sigma2 / 2.0);
    std::vector<cplx> y(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i)
        y[i] = symbols[i] + cplx(s * rng.normal(), s * rng.normal());
    return y;
}

}  // namespace snnrx::chan
