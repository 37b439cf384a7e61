#include "csplab/consistency.hpp"

namespace csplab {

FiniteSemantics::FiniteSemantics(const Instance& instance, const FiniteStructure& target)
    : domain_size_(target.domain_size()) {
    check_signature(instance, target);
    for (const auto& c : instance.constraints()) {
        relations_.push_back(&target.relation(c.relation));
    }
}

void FiniteSemantics::extend(const Code& c, std::size_t /*m*/, std::vector<Code>& out) const {
    for (int a = 0; a < domain_size_; ++a) {
        Code next = c;
        next.push_back(a);
        out.push_back(std::move(next));
    }
}

FiniteSemantics::Code FiniteSemantics::project(const Code& c, std::span<const std::size_t> positions) const {
    Code out;
    out.reserve(positions.size());
    for (auto p : positions) {
        out.push_back(c[p]);
    }
    return out;
}

bool FiniteSemantics::allows(std::size_t constraint, const Code& c, std::span<const std::size_t> positions) const {
    return relations_[constraint]->contains(project(c, positions));
}

ConstraintNetwork network_of(const Instance& instance) {
    ConstraintNetwork net;
    net.num_variables = instance.num_variables();
    for (const auto& c : instance.constraints()) {
        net.scopes.push_back(c.scope);
    }
    return net;
}

std::optional<FiniteConsistency> establish_kl(const Instance& instance, const FiniteStructure& target, int k, int l) {
    FiniteSemantics sem(instance, target);
    return establish_kl_network(sem, network_of(instance), k, l);
}

}  // namespace csplab
