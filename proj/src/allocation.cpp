#include "dualband/allocation.hpp"

#include <algorithm>
#include <stdexcept>

namespace dualband {

OwnershipMap::OwnershipMap(std::size_t num_uas, std::size_t num_rbs)
    : rb_owner(num_rbs, kUnowned), owned(num_uas)
{
}

void OwnershipMap::assign(std::size_t rb, std::size_t ua)
{
    if (rb_owner.at(rb) != kUnowned) {
        throw std::logic_error("OwnershipMap: RB already owned");
    }
    rb_owner[rb] = ua;
    auto& list = owned.at(ua);
    list.insert(std::lower_bound(list.begin(), list.end(), rb), rb);
}

void OwnershipMap::release(std::size_t rb)
{
    const std::size_t ua = rb_owner.at(rb);
    if (ua == kUnowned) {
        return;
    }
    auto& list = owned[ua];
    list.erase(std::lower_bound(list.begin(), list.end(), rb));
    rb_owner[rb] = kUnowned;
}

void OwnershipMap::transfer(std::size_t rb, std::size_t ua)
{
    release(rb);
    assign(rb, ua);
}

bool OwnershipMap::consistent() const
{
    std::size_t claimed = 0;
    for (std::size_t n = 0; n < owned.size(); ++n) {
        for (std::size_t k : owned[n]) {
            if (k >= rb_owner.size() || rb_owner[k] != n) {
                return false;
            }
        }
        claimed += owned[n].size();
    }
    const auto owned_rbs = static_cast<std::size_t>(
        std::count_if(rb_owner.begin(), rb_owner.end(), [](std::size_t o) { return o != kUnowned; }));
    return claimed == owned_rbs;
}

} // namespace dualband
