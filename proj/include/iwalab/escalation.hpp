#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "iwalab/padic.hpp"

namespace iwalab {

struct Escalation {
    std::string task;
    int from = 0;
    int to = 0;
};

/// Runs compute(N) starting at `start`, doubling N (up to `cap`) while
/// undecided(result) holds. Each step is appended to `log` when given.
/// Returns the last result and the precision it was computed at.
template <class Compute, class Undecided>
auto with_escalation(int start, int cap, Compute compute, Undecided undecided, const std::string& task = {},
                     std::vector<Escalation>* log = nullptr) {
    int n = start;
    for (;;) {
        auto result = compute(n);
        if (!undecided(result) || n >= cap) return std::make_pair(std::move(result), n);
        const int next = std::min(2 * n, cap);
        if (log) log->push_back({task, n, next});
        n = next;
    }
}

}  // namespace iwalab
