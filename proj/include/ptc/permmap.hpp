#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ptc/common.hpp"
#include "ptc/convcode.hpp"

namespace ptc {

/// Whole-book comparison of binary tuple distances against permutation
/// codeword distances over every distinct row pair.
enum class MappingClass {
    Increasing,  // d_perm >= d_bin + 1 for all pairs
    Preserving,  // d_perm >= d_bin for all pairs
    Reducing,    // some pair loses distance
};

std::string to_string(MappingClass c);

/// Number of differing positions; symmetric, 0 iff equal.
/// Throws InputError on length mismatch.
int hamming_distance(const Codeword& a, const Codeword& b);

/// Immutable one-to-one mapping between the 2^n binary n-tuples and 2^n
/// distinct length-M permutation codewords. Row order is the book's load
/// order; demapping ties resolve to the lowest row index.
class Codebook {
  public:
    struct Row {
        Bits tuple;
        Codeword codeword;
    };

    static Codebook from_rows(std::vector<Row> rows, std::string name = "codebook");

    /// n=2 -> M=3 mapping: 00->123, 01->132, 10->213, 11->231.
    static Codebook table1_m3();
    /// n=3 -> M=4 mapping: 000->1234 ... 111->3412.
    static Codebook table1_m4();

    /// File format: one "bits codeword" pair per line, '#' starts a comment.
    /// All invariants are validated; violations raise ConfigError with the
    /// offending line number.
    static Codebook load(const std::string& path);
    static Codebook parse(std::istream& in, const std::string& name);

    const std::string& name() const { return name_; }
    int M() const { return m_; }
    int n() const { return n_; }
    int size() const { return static_cast<int>(rows_.size()); }

    const Row& row(int q) const { return rows_[q]; }
    int row_of_tuple(unsigned tuple_index) const { return tuple_to_row_[tuple_index]; }

    /// Forward map. The tuple is an n-bit value, first bit in the MSB.
    const Codeword& codeword(unsigned tuple_index) const { return rows_[tuple_to_row_[tuple_index]].codeword; }
    const Codeword& map_forward(const Bits& tuple) const;

    /// Row index if c is in the book.
    std::optional<int> find_codeword(const Codeword& c) const;

    /// Row of the codeword nearest to c in Hamming distance (lowest row on
    /// ties). c may be any length-M sequence over 1..M.
    int demap_min_distance_row(const Codeword& c, std::uint64_t* ops = nullptr) const;
    /// Same decision, returned as the binary tuple.
    const Bits& demap_min_distance(const Codeword& c, std::uint64_t* ops = nullptr) const;

    /// Cached exhaustive pairwise minimum.
    int min_distance() const { return min_distance_; }

    MappingClass classify() const;

    /// Branch label distance after mapping labels through the book.
    LabelDistance label_distance() const;

    static unsigned tuple_index(const Bits& tuple);

  private:
    std::string name_;
    int m_ = 0;
    int n_ = 0;
    std::vector<Row> rows_;
    std::vector<int> tuple_to_row_;
    std::unordered_map<std::string, int> codeword_to_row_;
    int min_distance_ = 0;
};

}  // namespace ptc
