#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "puckpar/domain.hpp"

namespace puckpar {

struct ParConfig {
  double w_o = 2.0;                 // weight of the recent-form term
  double denominator_floor = 0.05;  // 1 point in 10 games

  // Throws ValidationError unless w_o >= 0 and 0 < floor <= 0.1.
  void validate() const;
};

// Player Availability Rating:
//
//   PAR = gap / ppcg_season + w_o * gap / ppcg_recent,  gap = predicted - actual
//
// with both team points percentages clamped below at denominator_floor.
// Positive means the player is under-performing the projection.
// Throws ValidationError on non-finite inputs.
double par_score(double ppg_predicted, double ppg_actual, const TeamForm& form, const ParConfig& config);

struct ParInput {
  std::string player_id;
  std::string name;
  std::string team_id;
  double ppg_predicted = 0.0;
  double ppg_actual = 0.0;
};

// Highest PAR first, ties by ascending player_id, truncated to `top`.
// Players whose team has no form entry are all listed in one
// ValidationError.
std::vector<ParEntry> par_leaderboard(const std::vector<ParInput>& players,
                                      const std::map<std::string, TeamForm>& forms, const ParConfig& config,
                                      std::size_t top);

}  // namespace puckpar
