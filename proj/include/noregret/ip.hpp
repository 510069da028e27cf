#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "noregret/common.hpp"

namespace noregret {

// Analysis of convergence with increasing permanence on finite traces. A trace
// of length T can witness the quantifier structure only up to horizon T, so
// every verdict here is "consistent at horizon T", never a proof.

struct IpTarget {
    enum class Kind { Point, Interval };

    Kind kind = Kind::Point;
    double value = 0.0;  // point location, or upper end r of the interval [0, r]

    static IpTarget point(double s) {
        require_finite(s, "IpTarget::point");
        return IpTarget{Kind::Point, s};
    }
    // Target set [0, r], r >= 0.
    static IpTarget interval(double r) {
        require_finite(r, "IpTarget::interval");
        require(r >= 0.0, "IpTarget::interval: r must be nonnegative");
        return IpTarget{Kind::Interval, r};
    }

    double distance(double s) const {
        if (kind == Kind::Point) {
            return std::abs(s - value);
        }
        if (s < 0.0) {
            return -s;
        }
        return s > value ? s - value : 0.0;
    }
};

struct IpQuery {
    double epsilon = 0.0;  // ball radius, > 0
    Index duration = 1;    // window length D >= 1
    Index start = 1;       // earliest admissible window start N >= 1
    IpTarget target;

    void validate() const {
        require(std::isfinite(epsilon) && epsilon > 0.0, "IpQuery: epsilon must be positive");
        require(duration >= 1, "IpQuery: duration must be >= 1");
        require(start >= 1, "IpQuery: start must be >= 1");
    }
};

// Smallest n >= N such that dist(target, s_{n+i}) <= eps for all i in 1..D,
// with stages 1-based (s_t = trace[t-1]). Empty optional when no window in the
// trace qualifies. Throws when no window fits the trace at all (N + D > T),
// which is a different outcome than a searched-but-absent witness.
std::optional<Index> ip_witness(const SequenceTrace& trace, const IpQuery& query);

struct IpProfileEntry {
    double epsilon = 0.0;
    Index duration = 0;
    Index start = 0;
    std::optional<Index> witness;
    bool infeasible = false;
};

struct IpReport {
    Index horizon = 0;
    IpTarget target;
    std::vector<IpProfileEntry> entries;
    bool consistent = false;  // every feasible query produced a witness
};

// Sweeps each (epsilon, duration) pair over the logarithmic start ladder
// {1, 10, 100, ..., floor(T/2)}.
IpReport ip_profile(const SequenceTrace& trace, const IpTarget& target,
                    const std::vector<std::pair<double, Index>>& queries);

struct TailCheck {
    std::optional<Index> index;            // smallest N certifying the tail
    std::optional<Index> last_exceedance;  // set when the check reports absence
};

// Classical-convergence probe: smallest N with |s_t - target| <= eps for all
// t >= N in the trace. A quiet tail is certified only once it extends past the
// doubling horizon of the last exceedance (T >= 2 * t_last); otherwise the
// quiet stretch may just be the gap before the next excursion of a growing-gap
// pattern, and the check reports absence with the last exceedance index.
TailCheck classical_tail_check(const SequenceTrace& trace, double target, double epsilon);

// Running means S_T = (1/T) sum_{t<=T} s_t, compensated summation. Emits a
// stderr note when entries are negative (outside the averaging lemma's
// hypothesis).
SequenceTrace cesaro_averages(const SequenceTrace& trace);

// q_t = 1 when t is a power of two, 1/t^2 otherwise, for t = 1..length.
// Cesaro-vanishing yet classically divergent: the unit excursions recur with
// doubling gaps forever.
SequenceTrace example1_sequence(Index length);

}  // namespace noregret
