#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hslab/errors.hpp"

namespace hslab {

// A label is out of the admissible 1-based range.
struct IndexOutOfRangeError : Error {
    using Error::Error;
};

// Two label sets must have matching (or off-by-one) sizes.
struct SizeMismatchError : Error {
    using Error::Error;
};

// Shifting a label set by +1 would leave the ambient range.
struct ShiftOutOfRangeError : Error {
    using Error::Error;
};

// Ordered partition of the label range {1, ..., total} into the r labels
// `a` (positions assigned to the Van Vleck roots in the merged sorted
// root list) and the n = total - r complementary labels `b` (positions
// of the Stieltjes roots).  Both are sorted ascending and 1-based.
struct ZeroPattern {
    int total = 0;
    std::vector<int> a;
    std::vector<int> b;

    static ZeroPattern from_a(int total, std::vector<int> a);

    int r() const { return static_cast<int>(a.size()); }
    int n() const { return static_cast<int>(b.size()); }
    bool operator==(const ZeroPattern& o) const { return total == o.total && a == o.a; }
};

// All C(n+r, r) patterns with |a| = r over {1, ..., n+r}, in
// lexicographic order of the a-labels.
std::vector<ZeroPattern> enumerate_patterns(int n, int r);

// values[label - 1] for each label, preserving label order.
std::vector<double> select(const std::vector<double>& values, const std::vector<int>& labels);

// Arrow relation between two n-element label sets B and C: doubling B
// against doubled-plus-one C must interleave, i.e.
// vector_proper_position(2*[B], 2*[C]+1).  Equivalent integer form:
// b_i <= c_i and c_i < b_{i+1} for all i.
bool arrow_same(const std::vector<int>& b, const std::vector<int>& c);

// Arrow relation between an n-element B and an (n+1)-element C.  It holds
// exactly when every surrounding interlacing y of a chain x stays a
// surrounding interlacing after selecting x at the B labels and y at the C
// labels; in integer form c_i <= b_i and b_i < c_{i+1} for all i, i.e.
// vector_proper_position(2*[B]+1, 2*[C]) with the surrounding chain
// 2c_1 <= 2b_1+1 <= 2c_2 <= ... <= 2b_n+1 <= 2c_{n+1}.
bool arrow_consecutive(const std::vector<int>& b, const std::vector<int>& c);

// Number of same-size predecessors of B under the arrow relation:
// b_1 (b_2 - b_1) ... (b_n - b_{n-1}).
std::int64_t count_predecessors(const std::vector<int>& b);

// All labels shifted by +1; requires max(a) + 1 <= total.
std::vector<int> shift(const std::vector<int>& a, int total);

// "1,3" style literal for CLI and CSV output; the empty set prints as "".
std::string pattern_to_string(const std::vector<int>& a);
std::vector<int> parse_pattern(const std::string& text);

}  // namespace hslab
