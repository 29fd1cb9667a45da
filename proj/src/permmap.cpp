#include "ptc/permmap.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <limits>
#include <sstream>

namespace ptc {

std::string to_string(MappingClass c) {
    switch (c) {
        case MappingClass::Increasing: return "increasing";
        case MappingClass::Preserving: return "preserving";
        case MappingClass::Reducing: return "reducing";
    }
    return "?";
}

int hamming_distance(const Codeword& a, const Codeword& b) {
    if (a.size() != b.size())
        throw InputError("codeword length mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    int d = 0;
    for (size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

unsigned Codebook::tuple_index(const Bits& tuple) {
    unsigned idx = 0;
    for (auto bit : tuple) idx = (idx << 1) | bit;
    return idx;
}

Codebook Codebook::from_rows(std::vector<Row> rows, std::string name) {
    Codebook book;
    book.name_ = std::move(name);
    book.rows_ = std::move(rows);
    if (book.rows_.size() < 2) throw ConfigError(book.name_ + ": a codebook needs at least 2 rows");
    if (!std::has_single_bit(book.rows_.size()))
        throw ConfigError(book.name_ + ": row count " + std::to_string(book.rows_.size()) + " is not a power of two");

    book.n_ = std::bit_width(book.rows_.size()) - 1;
    book.m_ = static_cast<int>(book.rows_[0].codeword.size());
    if (book.n_ > book.m_)
        throw ConfigError(book.name_ + ": n=" + std::to_string(book.n_) + " exceeds M=" + std::to_string(book.m_));

    book.tuple_to_row_.assign(book.rows_.size(), -1);
    for (int q = 0; q < book.size(); ++q) {
        const Row& row = book.rows_[q];
        if (static_cast<int>(row.tuple.size()) != book.n_)
            throw ConfigError(book.name_ + ": row " + std::to_string(q + 1) + " tuple has wrong length");
        if (static_cast<int>(row.codeword.size()) != book.m_)
            throw ConfigError(book.name_ + ": row " + std::to_string(q + 1) + " codeword has wrong length");
        if (!is_permutation_1m(row.codeword))
            throw ConfigError(book.name_ + ": row " + std::to_string(q + 1) + " codeword " +
                              codeword_to_string(row.codeword) + " is not a permutation of 1.." +
                              std::to_string(book.m_));
        const unsigned idx = tuple_index(row.tuple);
        if (book.tuple_to_row_[idx] != -1)
            throw ConfigError(book.name_ + ": duplicate tuple " + bits_to_string(row.tuple));
        book.tuple_to_row_[idx] = q;
        const std::string key = codeword_to_string(row.codeword);
        if (!book.codeword_to_row_.emplace(key, q).second)
            throw ConfigError(book.name_ + ": duplicate codeword " + key);
    }

    int dmin = std::numeric_limits<int>::max();
    for (int a = 0; a < book.size(); ++a)
        for (int b = a + 1; b < book.size(); ++b)
            dmin = std::min(dmin, hamming_distance(book.rows_[a].codeword, book.rows_[b].codeword));
    book.min_distance_ = dmin;
    return book;
}

Codebook Codebook::table1_m3() {
    return from_rows({{{0, 0}, {1, 2, 3}}, {{0, 1}, {1, 3, 2}}, {{1, 0}, {2, 1, 3}}, {{1, 1}, {2, 3, 1}}},
                     "m3_table1");
}

Codebook Codebook::table1_m4() {
    return from_rows({{{0, 0, 0}, {1, 2, 3, 4}},
                      {{0, 0, 1}, {1, 3, 4, 2}},
                      {{0, 1, 0}, {1, 4, 2, 3}},
                      {{0, 1, 1}, {2, 1, 4, 3}},
                      {{1, 0, 0}, {2, 3, 1, 4}},
                      {{1, 0, 1}, {2, 4, 1, 3}},
                      {{1, 1, 0}, {3, 2, 4, 1}},
                      {{1, 1, 1}, {3, 4, 1, 2}}},
                     "m4_table1");
}

Codebook Codebook::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open codebook file '" + path + "'");
    return parse(in, path);
}

Codebook Codebook::parse(std::istream& in, const std::string& name) {
    std::vector<Row> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::stringstream ss(line);
        std::string tuple_str, codeword_str, extra;
        if (!(ss >> tuple_str)) continue;  // blank/comment line
        if (!(ss >> codeword_str) || (ss >> extra))
            throw ConfigError(name + ":" + std::to_string(line_no) + ": expected 'bits codeword'");
        try {
            rows.push_back({bits_from_string(tuple_str), codeword_from_string(codeword_str)});
        } catch (const Error& e) {
            throw ConfigError(name + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    try {
        return from_rows(std::move(rows), name);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(e.what()) + " (while loading " + name + ")");
    }
}

const Codeword& Codebook::map_forward(const Bits& tuple) const {
    if (static_cast<int>(tuple.size()) != n_)
        throw InputError("tuple length " + std::to_string(tuple.size()) + " != n=" + std::to_string(n_));
    return codeword(tuple_index(tuple));
}

std::optional<int> Codebook::find_codeword(const Codeword& c) const {
    const auto it = codeword_to_row_.find(codeword_to_string(c));
    if (it == codeword_to_row_.end()) return std::nullopt;
    return it->second;
}

int Codebook::demap_min_distance_row(const Codeword& c, std::uint64_t* ops) const {
    int best_row = 0;
    int best = std::numeric_limits<int>::max();
    for (int q = 0; q < size(); ++q) {
        const int d = hamming_distance(rows_[q].codeword, c);
        if (d < best) {
            best = d;
            best_row = q;
        }
    }
    if (ops) *ops += static_cast<std::uint64_t>(size()) * m_;
    return best_row;
}

const Bits& Codebook::demap_min_distance(const Codeword& c, std::uint64_t* ops) const {
    return rows_[demap_min_distance_row(c, ops)].tuple;
}

MappingClass Codebook::classify() const {
    int worst = std::numeric_limits<int>::max();
    for (int a = 0; a < size(); ++a) {
        for (int b = a + 1; b < size(); ++b) {
            int dbin = 0;
            for (int i = 0; i < n_; ++i) dbin += rows_[a].tuple[i] != rows_[b].tuple[i];
            const int dperm = hamming_distance(rows_[a].codeword, rows_[b].codeword);
            worst = std::min(worst, dperm - dbin);
        }
    }
    if (worst >= 1) return MappingClass::Increasing;
    if (worst >= 0) return MappingClass::Preserving;
    return MappingClass::Reducing;
}

LabelDistance Codebook::label_distance() const {
    std::vector<Codeword> by_tuple(rows_.size());
    for (size_t idx = 0; idx < rows_.size(); ++idx) by_tuple[idx] = codeword(static_cast<unsigned>(idx));
    return [by_tuple = std::move(by_tuple)](unsigned a, unsigned b) {
        return hamming_distance(by_tuple[a], by_tuple[b]);
    };
}

}  // namespace ptc
