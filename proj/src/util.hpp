#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gca {

// Sums a list of doubles after sorting it. The result depends only on the
// multiset of addends, not on their order, so renaming or reordering graph
// elements cannot perturb the last bits of a reported number.
inline double stable_sum(std::vector<double>& terms) {
    std::sort(terms.begin(), terms.end());
    double acc = 0.0;
    for (double t : terms) acc += t;
    return acc;
}

inline double stable_sum_copy(const std::vector<double>& terms) {
    std::vector<double> copy(terms);
    return stable_sum(copy);
}

// splitmix64, used to derive independent per-worker RNG seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view data);

// "fnv1a64:" followed by 16 lowercase hex digits.
std::string content_digest(std::string_view data);

// Shortest-of-15-significant-digits rendering used for every decimal that
// appears in a report. snprintf with %.15g, locale independent.
std::string fmt15(double x);

// 17 significant digits: round-trips any double exactly (omega witnesses).
std::string fmt17(double x);

}  // namespace gca
