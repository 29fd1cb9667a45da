#include "ptc/common.hpp"

#include <algorithm>
#include <sstream>

namespace ptc {

bool is_permutation_1m(const Codeword& c) {
    const int m = static_cast<int>(c.size());
    std::vector<bool> seen(m, false);
    for (int v : c) {
        if (v < 1 || v > m || seen[v - 1]) return false;
        seen[v - 1] = true;
    }
    return true;
}

std::string codeword_to_string(const Codeword& c) {
    const int m = static_cast<int>(c.size());
    std::string out;
    for (int i = 0; i < m; ++i) {
        if (m > 9 && i > 0) out += ',';
        out += std::to_string(c[i]);
    }
    return out;
}

Codeword codeword_from_string(const std::string& s) {
    Codeword c;
    if (s.find(',') != std::string::npos) {
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) throw InputError("empty symbol in codeword '" + s + "'");
            c.push_back(std::stoi(tok));
        }
    } else {
        for (char ch : s) {
            if (ch < '1' || ch > '9') throw InputError("bad symbol '" + std::string(1, ch) + "' in codeword '" + s + "'");
            c.push_back(ch - '0');
        }
    }
    return c;
}

std::string bits_to_string(const Bits& b) {
    std::string out;
    out.reserve(b.size());
    for (auto bit : b) out += bit ? '1' : '0';
    return out;
}

Bits bits_from_string(const std::string& s) {
    Bits b;
    b.reserve(s.size());
    for (char ch : s) {
        if (ch != '0' && ch != '1') throw InputError("bad bit '" + std::string(1, ch) + "' in '" + s + "'");
        b.push_back(ch == '1');
    }
    return b;
}

}  // namespace ptc
