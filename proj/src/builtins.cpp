#include "matterwave/scenario.hpp"

namespace matterwave {

const std::vector<BuiltinScenario>& builtin_scenarios()
{
    static const std::vector<BuiltinScenario> list{
#include "builtin_scenarios.inc"
    };
    return list;
}

const BuiltinScenario* find_builtin(const std::string& name)
{
    for (const auto& b : builtin_scenarios())
        if (b.name == name) return &b;
    return nullptr;
}

}  // namespace matterwave
