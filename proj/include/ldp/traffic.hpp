#ifndef LDP_TRAFFIC_HPP
#define LDP_TRAFFIC_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "ldp/conflict_graph.hpp"
#include "ldp/errors.hpp"
#include "ldp/rational.hpp"

namespace ldp {

using SlotIndex = std::int64_t;

/// Smallest X with 1-(1-p)^X >= P: the number of transmission
/// opportunities a packet needs so that delivery probability reaches P
/// when each try succeeds with probability p.
///
/// The log-ratio is snapped to the nearest integer when within 1e-9 and
/// the boundary is then decided by extended-precision multiplication, so
/// exactly-achievable targets (e.g. p=0.5, P=1-2^-6) do not fall victim
/// to floating-point off-by-one.
inline std::int64_t required_transmissions(double p, double P) {
    if (!(p > 0.0 && p < 1.0))
        throw InputError("link reliability p must lie in (0,1), got " + std::to_string(p));
    if (!(P > 0.0 && P < 1.0))
        throw InputError("reliability requirement P must lie in (0,1), got " + std::to_string(P));
    if (p >= P) return 1;

    const long double fail = 1.0L - static_cast<long double>(p);
    const long double target = 1.0L - static_cast<long double>(P);
    const auto meets = [&](std::int64_t x) {
        if (x <= 0) return false;
        if (x <= 4096) {
            long double acc = 1.0L;
            for (std::int64_t k = 0; k < x; ++k) {
                acc *= fail;
                if (acc <= target) return true; // monotone decreasing
            }
            return acc <= target;
        }
        return std::pow(fail, static_cast<long double>(x)) <= target;
    };

    const double ratio = std::log1p(-P) / std::log1p(-p);
    const double nearest = std::nearbyint(ratio);
    std::int64_t cand = std::abs(ratio - nearest) < 1e-9
                            ? static_cast<std::int64_t>(nearest)
                            : static_cast<std::int64_t>(std::ceil(ratio));
    if (cand < 1) cand = 1;
    int guard = 0;
    while (cand > 1 && meets(cand - 1)) {
        --cand;
        if (++guard > 1000) throw InvariantError("required_transmissions failed to converge");
    }
    while (!meets(cand)) {
        ++cand;
        if (++guard > 1000) throw InvariantError("required_transmissions failed to converge");
    }
    return cand;
}

/// Delivery probability that X tries at per-try reliability p achieve:
/// 1-(1-p)^X, clamped below 1 so the result remains a valid requirement.
inline double reliability_for(double p, std::int64_t x) {
    if (!(p > 0.0 && p < 1.0)) throw InputError("link reliability p must lie in (0,1)");
    if (x < 1) throw InputError("work demand must be >= 1");
    const long double fail = std::pow(1.0L - static_cast<long double>(p),
                                      static_cast<long double>(x));
    double out = static_cast<double>(1.0L - fail);
    if (out >= 1.0) out = std::nextafter(1.0, 0.0);
    if (out <= 0.0) out = std::nextafter(0.0, 1.0);
    return out;
}

/// Per-link URLLC traffic tuple plus the derived work demand.
struct LinkTraffic {
    LinkId link = 0;
    SlotIndex period = 1;            // T
    SlotIndex relative_deadline = 1; // D
    double reliability_req = 0.9;    // P
    double link_reliability = 0.9;   // p
    SlotIndex first_arrival = 0;     // A1
    std::int64_t work_demand = 1;    // X

    Rat density() const { return Rat(work_demand, relative_deadline); }     // X/D
    Rat utilization() const { return Rat(work_demand, period); }            // X/T

    void validate() const {
        if (link <= 0) throw InputError("link id must be positive");
        if (!(relative_deadline > 0 && relative_deadline <= period))
            throw InputError("link " + std::to_string(link) +
                             ": deadline must satisfy 0 < D <= T");
        if (!(link_reliability > 0.0 && link_reliability < 1.0))
            throw InputError("link " + std::to_string(link) + ": p must lie in (0,1)");
        if (!(reliability_req > 0.0 && reliability_req < 1.0))
            throw InputError("link " + std::to_string(link) + ": P must lie in (0,1)");
        if (work_demand < 1)
            throw InputError("link " + std::to_string(link) + ": work demand must be >= 1");
        if (first_arrival < 0)
            throw InputError("link " + std::to_string(link) + ": first arrival must be >= 0");
    }
};

/// Builds a validated tuple; the work demand is derived from (p, P) when
/// not supplied.
inline LinkTraffic make_link_traffic(LinkId link, SlotIndex period, SlotIndex deadline,
                                     double reliability_req, double link_reliability,
                                     SlotIndex first_arrival = 0,
                                     std::optional<std::int64_t> work_demand = std::nullopt) {
    LinkTraffic t;
    t.link = link;
    t.period = period;
    t.relative_deadline = deadline;
    t.reliability_req = reliability_req;
    t.link_reliability = link_reliability;
    t.first_arrival = first_arrival;
    t.work_demand = work_demand ? *work_demand
                                : required_transmissions(link_reliability, reliability_req);
    t.validate();
    return t;
}

/// Arrival time and absolute deadline of the j-th packet (j >= 1).
inline std::pair<SlotIndex, SlotIndex> arrival_and_deadline(const LinkTraffic& t,
                                                            std::int64_t packet_index) {
    if (packet_index < 1)
        throw InputError("packet index must be >= 1, got " + std::to_string(packet_index));
    const SlotIndex arrival = t.first_arrival + (packet_index - 1) * t.period;
    return {arrival, arrival + t.relative_deadline};
}

} // namespace ldp

#endif // LDP_TRAFFIC_HPP
