#pragma once

#include "dualband/powermodel.hpp"

#include <cstddef>
#include <limits>
#include <vector>

namespace dualband {

/// UAs served over mmW in one slot, each holding all K2 RBs for `tx_time`.
struct MmwSelection {
    std::size_t slot = 0;
    std::vector<std::size_t> selected;  ///< ua ids, ascending mmW power
    std::vector<RbSetSolution> solutions; ///< parallel to `selected`
    std::vector<std::size_t> remainder; ///< ua ids handed to the microwave band
    double tx_time = 0.0;
    double total_power = 0.0;
};

/// Exclusive microwave RB ownership over the local UAs of one slot.
struct OwnershipMap {
    static constexpr std::size_t kUnowned = std::numeric_limits<std::size_t>::max();

    std::vector<std::size_t> rb_owner;           ///< per RB: local UA index or kUnowned
    std::vector<std::vector<std::size_t>> owned; ///< per UA: ascending RB indices

    OwnershipMap() = default;
    OwnershipMap(std::size_t num_uas, std::size_t num_rbs);

    std::size_t num_uas() const noexcept { return owned.size(); }
    std::size_t num_rbs() const noexcept { return rb_owner.size(); }

    void assign(std::size_t rb, std::size_t ua);
    void release(std::size_t rb);
    /// Moves `rb` to `ua`, whether it was owned or not.
    void transfer(std::size_t rb, std::size_t ua);
    /// Both views agree and every RB has at most one owner.
    bool consistent() const;

    friend bool operator==(const OwnershipMap&, const OwnershipMap&) = default;
};

/// Microwave outcome of one slot. Local UA n is global id `uas[n]`.
struct MuwAllocation {
    std::vector<std::size_t> uas;
    OwnershipMap ownership;
    std::vector<RbSetSolution> solutions; ///< per local UA, over its owned RBs
    double total_power = 0.0;
    std::size_t escalations = 0;
    std::size_t transfers = 0;
};

/// Dual-band outcome of one slot of one QoS class.
struct SlotAllocation {
    std::size_t horizon = 0;
    std::size_t slot = 0;
    std::vector<std::size_t> group; ///< ua ids served in this slot
    MmwSelection mmw;
    MuwAllocation muw;
    double mmw_power = 0.0;
    double muw_power = 0.0;

    double total_power() const { return mmw_power + muw_power; }
};

} // namespace dualband
