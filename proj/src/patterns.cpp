#include "hslab/patterns.hpp"

#include <algorithm>
#include <cstdio>

#include "hslab/realpoly.hpp"

namespace hslab {

ZeroPattern ZeroPattern::from_a(int total, std::vector<int> a) {
    std::sort(a.begin(), a.end());
    int prev = 0;
    for (int v : a) {
        if (v < 1 || v > total || v == prev) {
            char msg[96];
            std::snprintf(msg, sizeof(msg),
                          "label %d invalid for a pattern over {1..%d}", v, total);
            throw IndexOutOfRangeError(msg);
        }
        prev = v;
    }
    ZeroPattern p;
    p.total = total;
    p.b.reserve(static_cast<std::size_t>(total) - a.size());
    std::size_t ai = 0;
    for (int v = 1; v <= total; ++v) {
        if (ai < a.size() && a[ai] == v) {
            ++ai;
        } else {
            p.b.push_back(v);
        }
    }
    p.a = std::move(a);
    return p;
}

std::vector<ZeroPattern> enumerate_patterns(int n, int r) {
    const int total = n + r;
    std::vector<ZeroPattern> out;
    if (n < 0 || r < 0) return out;
    std::vector<int> cur(r);
    for (int i = 0; i < r; ++i) cur[i] = i + 1;
    for (;;) {
        out.push_back(ZeroPattern::from_a(total, cur));
        int i = r - 1;
        while (i >= 0 && cur[i] == total - (r - 1 - i)) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < r; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

std::vector<double> select(const std::vector<double>& values, const std::vector<int>& labels) {
    std::vector<double> out;
    out.reserve(labels.size());
    for (int l : labels) {
        if (l < 1 || l > static_cast<int>(values.size())) {
            char msg[96];
            std::snprintf(msg, sizeof(msg), "label %d outside the value range 1..%zu", l,
                          values.size());
            throw IndexOutOfRangeError(msg);
        }
        out.push_back(values[static_cast<std::size_t>(l) - 1]);
    }
    return out;
}

namespace {

std::vector<double> doubled(const std::vector<int>& v, double offset) {
    std::vector<double> out;
    out.reserve(v.size());
    for (int x : v) out.push_back(2.0 * x + offset);
    return out;
}

}  // namespace

bool arrow_same(const std::vector<int>& b, const std::vector<int>& c) {
    if (b.size() != c.size())
        throw SizeMismatchError("arrow_same needs label sets of equal size");
    return vector_proper_position(doubled(b, 0.0), doubled(c, 1.0));
}

bool arrow_consecutive(const std::vector<int>& b, const std::vector<int>& c) {
    if (c.size() != b.size() + 1)
        throw SizeMismatchError("arrow_consecutive needs |C| = |B| + 1");
    return vector_proper_position(doubled(b, 1.0), doubled(c, 0.0));
}

std::int64_t count_predecessors(const std::vector<int>& b) {
    std::int64_t count = 1;
    int prev = 0;
    for (int v : b) {
        count *= (v - prev);
        prev = v;
    }
    return count;
}

std::vector<int> shift(const std::vector<int>& a, int total) {
    if (!a.empty() && a.back() + 1 > total) {
        char msg[96];
        std::snprintf(msg, sizeof(msg), "shifting label %d leaves the range {1..%d}",
                      a.back(), total);
        throw ShiftOutOfRangeError(msg);
    }
    std::vector<int> out = a;
    for (int& v : out) ++v;
    return out;
}

std::string pattern_to_string(const std::vector<int>& a) {
    std::string out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(a[i]);
    }
    return out;
}

std::vector<int> parse_pattern(const std::string& text) {
    std::vector<int> out;
    if (text.empty()) return out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(tok, &used);
        } catch (const std::exception&) {
            throw Error("pattern literal must be comma-separated integers, got '" + text + "'");
        }
        if (used != tok.size())
            throw Error("pattern literal must be comma-separated integers, got '" + text + "'");
        out.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace hslab
