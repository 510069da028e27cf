#include "noregret/ip.hpp"

#include <iostream>
#include <sstream>

namespace noregret {

std::optional<Index> ip_witness(const SequenceTrace& trace, const IpQuery& query) {
    query.validate();
    require_finite(trace, "ip_witness trace");
    const Index T = trace.size();
    if (query.start + query.duration > T) {
        std::ostringstream msg;
        msg << "ip_witness: no window of duration " << query.duration << " starting at n >= "
            << query.start << " fits a trace of length " << T;
        throw std::invalid_argument(msg.str());
    }
    // run = length of the in-ball streak ending at stage t; the window
    // (n, n + D] is clean iff run >= D at t = n + D.
    Index run = 0;
    for (Index t = 1; t <= T; ++t) {
        run = query.target.distance(trace[t - 1]) <= query.epsilon ? run + 1 : 0;
        if (run >= query.duration && t - query.duration >= query.start) {
            return t - query.duration;
        }
    }
    return std::nullopt;
}

IpReport ip_profile(const SequenceTrace& trace, const IpTarget& target,
                    const std::vector<std::pair<double, Index>>& queries) {
    require(!queries.empty(), "ip_profile: empty query list");
    const Index T = trace.size();
    std::vector<Index> ladder;
    for (Index n = 1; n <= T / 2; n *= 10) {
        ladder.push_back(n);
    }
    if (T / 2 >= 1 && (ladder.empty() || ladder.back() != T / 2)) {
        ladder.push_back(T / 2);
    }

    IpReport report;
    report.horizon = T;
    report.target = target;
    report.consistent = true;
    for (const auto& [epsilon, duration] : queries) {
        for (Index start : ladder) {
            IpProfileEntry entry;
            entry.epsilon = epsilon;
            entry.duration = duration;
            entry.start = start;
            if (start + duration > T) {
                entry.infeasible = true;
            } else {
                entry.witness = ip_witness(trace, IpQuery{epsilon, duration, start, target});
                if (!entry.witness) {
                    report.consistent = false;
                }
            }
            report.entries.push_back(entry);
        }
    }
    return report;
}

TailCheck classical_tail_check(const SequenceTrace& trace, double target, double epsilon) {
    require(trace.size() > 0, "classical_tail_check: empty trace");
    require(std::isfinite(epsilon) && epsilon > 0.0,
            "classical_tail_check: epsilon must be positive");
    require_finite(trace, "classical_tail_check trace");
    const Index T = trace.size();
    Index last_exceedance = 0;
    for (Index t = 1; t <= T; ++t) {
        if (std::abs(trace[t - 1] - target) > epsilon) {
            last_exceedance = t;
        }
    }
    if (last_exceedance == 0) {
        return TailCheck{1, std::nullopt};
    }
    if (T >= 2 * last_exceedance) {
        return TailCheck{last_exceedance + 1, std::nullopt};
    }
    return TailCheck{std::nullopt, last_exceedance};
}

SequenceTrace cesaro_averages(const SequenceTrace& trace) {
    require_finite(trace, "cesaro_averages trace");
    if (trace.size() > 0 && (trace.array() < 0.0).any()) {
        std::cerr << "cesaro_averages: trace has negative entries; the vanishing-average "
                     "implication assumes a nonnegative sequence\n";
    }
    SequenceTrace averages(trace.size());
    KahanSum sum;
    for (Index t = 1; t <= trace.size(); ++t) {
        sum.add(trace[t - 1]);
        averages[t - 1] = sum.value() / static_cast<double>(t);
    }
    return averages;
}

SequenceTrace example1_sequence(Index length) {
    require(length >= 1, "example1_sequence: length must be >= 1");
    SequenceTrace q(length);
    for (Index t = 1; t <= length; ++t) {
        const auto u = static_cast<unsigned long long>(t);
        const bool power_of_two = (u & (u - 1)) == 0;
        q[t - 1] = power_of_two ? 1.0 : 1.0 / (static_cast<double>(t) * static_cast<double>(t));
    }
    return q;
}

}  // namespace noregret
