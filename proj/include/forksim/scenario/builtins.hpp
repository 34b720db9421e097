#pragma once

#include <forksim/scenario/script.hpp>

#include <optional>
#include <string>
#include <vector>

namespace forksim::scenario {

/// Three peers: p1 (power 1), client p2, p3 (power 24). p3 mines a withheld
/// branch to height 45 while p1 commits t1 on the other side of a partition.
ScenarioScript builtin_fig4();

/// fig4 where t2 spends the funds t1 needs; p1 re-mines t1 after the reorg.
ScenarioScript builtin_fig4_conflict();

/// fig4 opening without withholding: p3 heals after `private_blocks` blocks,
/// so whether t1 commits first is a race.
ScenarioScript builtin_fig4_racy(std::uint64_t private_blocks = 300);

/// fig4-racy with no partition at all.
ScenarioScript builtin_control();

/// Partition-assisted double spend by attacker node a against merchant m.
/// With window = false the attacker neither withholds nor stops.
ScenarioScript builtin_doublespend(double attacker_power = 24.0, bool window = true);

/// Private-fork race without partitions; `attacker_share` of total power.
ScenarioScript builtin_51pct(double attacker_share = 0.6);

/// fig4 flow with a conditional-payment contract checked on chain.
ScenarioScript builtin_fig7_onchain();

/// fig4 flow where the client checks the payment off chain before calling.
ScenarioScript builtin_fig8_offchain();

std::vector<std::string> builtin_names();
std::optional<ScenarioScript> builtin(const std::string& name);

} // namespace forksim::scenario
