#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace snnrx {

enum class Polarity { unipolar, bipolar };

// Binary spike matrix: one row per signal, one column per discrete time step.
// Unipolar rasters hold {0,1}, bipolar rasters {-1,0,+1} (ternary encoding).
struct SpikeRaster {
    std::size_t rows = 0;
    std::size_t cols = 0;  // K time steps
    Polarity polarity = Polarity::unipolar;
    std::vector<int8_t> data;

    SpikeRaster() = default;
    SpikeRaster(std::size_t r, std::size_t k, Polarity p = Polarity::unipolar)
        : rows(r), cols(k), polarity(p), data(r * k, 0) {
        if (k < 1) throw std::invalid_argument("SpikeRaster: K >= 1 required");
    }

    int8_t& at(std::size_t r, std::size_t k) { return data[r * cols + k]; }
    int8_t at(std::size_t r, std::size_t k) const { return data[r * cols + k]; }

    const int8_t* row(std::size_t r) const { return data.data() + r * cols; }

    std::size_t count_nonzero() const {
        std::size_t n = 0;
        for (int8_t v : data) n += (v != 0);
        return n;
    }

    bool valid() const {
        for (int8_t v : data) {
            if (polarity == Polarity::unipolar) {
                if (v != 0 && v != 1) return false;
            } else {
                if (v < -1 || v > 1) return false;
            }
        }
        return true;
    }

    // Stack another raster below this one; K must match. Result is bipolar if
    // either input is.
    void append_rows(const SpikeRaster& other) {
        if (rows == 0 && cols == 0) cols = other.cols;
        if (other.cols != cols) throw std::invalid_argument("append_rows: K mismatch");
        if (other.polarity == Polarity::bipolar) polarity = Polarity::bipolar;
        data.insert(data.end(), other.data.begin(), other.data.end());
        rows += other.rows;
    }
};

}  // namespace snnrx
