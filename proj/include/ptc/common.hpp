#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad parameters in a code spec, codebook file or experiment config.
struct ConfigError : Error {
    using Error::Error;
};

/// Malformed data handed to an operation (wrong length, missing entry, ...).
struct InputError : Error {
    using Error::Error;
};

/// No finite-cost perfect assignment exists.
struct InfeasibleError : Error {
    using Error::Error;
};

/// Request is outside the supported problem size.
struct RefusalError : Error {
    using Error::Error;
};

using Bits = std::vector<std::uint8_t>;

/// Permutation codeword: length-M sequence of 1-based symbols. Corrupted
/// sources may yield repeated symbols, so not every Codeword is a permutation.
using Codeword = std::vector<int>;

bool is_permutation_1m(const Codeword& c);

/// "123" for M <= 9, "1,2,3" otherwise.
std::string codeword_to_string(const Codeword& c);
Codeword codeword_from_string(const std::string& s);

std::string bits_to_string(const Bits& b);
Bits bits_from_string(const std::string& s);

/// Dense square matrix, row-major.
template <typename T>
class Square {
  public:
    Square() = default;
    explicit Square(int dim, T init = T{}) : dim_(dim), cells_(static_cast<size_t>(dim) * dim, init) {}

    int dim() const { return dim_; }

    T& operator()(int i, int j) { return cells_[static_cast<size_t>(i) * dim_ + j]; }
    const T& operator()(int i, int j) const { return cells_[static_cast<size_t>(i) * dim_ + j]; }

    bool operator==(const Square&) const = default;

  private:
    int dim_ = 0;
    std::vector<T> cells_;
};

using Complex = std::complex<double>;

}  // namespace ptc
