#pragma once

#include "ptc/common.hpp"

namespace ptc {

/// M-FSK modulated permutation codeword: rows are frequencies, columns are
/// time slots, exactly one sqrt(Es) entry per row and column.
struct CodeMatrix {
    Square<double> cells;
    double es = 1.0;
    int M() const { return cells.dim(); }
};

/// Channel output; arbitrary complex samples.
struct ReceivedMatrix {
    Square<Complex> cells;
    int M() const { return cells.dim(); }
};

/// Threshold-detected bits; noise may break the one-per-row/column structure.
struct DemodMatrix {
    Square<std::uint8_t> cells;
    int M() const { return cells.dim(); }
};

inline constexpr double kThresholdScale = 0.6;  // tau = 0.6 sqrt(Es)

/// Column j carries sqrt(es) at row c_j. Throws InputError unless c is a
/// permutation of 1..M and es > 0.
CodeMatrix modulate(const Codeword& c, double es);

/// Per-column argmax of sample magnitude, ties to the lowest row. The complex
/// correlation |y^H s_m| equals sqrt(Es)|y_mj|, and the constant sqrt(Es) > 0
/// drops out of the argmax. Output entries are 1..M but need not form a
/// permutation.
Codeword envelope_detect(const ReceivedMatrix& y);

/// r_ij = 1 iff |y_ij| >= tau (inclusive, as defined).
DemodMatrix threshold_detect(const ReceivedMatrix& y, double tau);

}  // namespace ptc
