#include "ptc/modem.hpp"

#include <cmath>

namespace ptc {

CodeMatrix modulate(const Codeword& c, double es) {
    if (!is_permutation_1m(c))
        throw InputError("cannot modulate non-permutation sequence " + codeword_to_string(c));
    if (!(es > 0.0)) throw InputError("symbol energy must be positive");
    const int m = static_cast<int>(c.size());
    CodeMatrix s{Square<double>(m), es};
    const double amplitude = std::sqrt(es);
    for (int j = 0; j < m; ++j) s.cells(c[j] - 1, j) = amplitude;
    return s;
}

Codeword envelope_detect(const ReceivedMatrix& y) {
    const int m = y.M();
    Codeword r(m);
    for (int j = 0; j < m; ++j) {
        int best_row = 0;
        double best = std::abs(y.cells(0, j));
        for (int i = 1; i < m; ++i) {
            const double mag = std::abs(y.cells(i, j));
            if (mag > best) {
                best = mag;
                best_row = i;
            }
        }
        r[j] = best_row + 1;
    }
    return r;
}

DemodMatrix threshold_detect(const ReceivedMatrix& y, double tau) {
    const int m = y.M();
    DemodMatrix r{Square<std::uint8_t>(m)};
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) r.cells(i, j) = std::abs(y.cells(i, j)) >= tau ? 1 : 0;
    return r;
}

}  // namespace ptc
