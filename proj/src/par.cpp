#include "puckpar/par.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace puckpar {

void ParConfig::validate() const {
  if (!(std::isfinite(w_o) && w_o >= 0)) throw ValidationError(fmt::format("w_o must be >= 0, got {}", w_o));
  if (!(denominator_floor > 0 && denominator_floor <= 0.1)) {
    throw ValidationError(fmt::format("denominator floor must be in (0, 0.1], got {}", denominator_floor));
  }
}

double par_score(double ppg_predicted, double ppg_actual, const TeamForm& form, const ParConfig& config) {
  if (!std::isfinite(ppg_predicted) || !std::isfinite(ppg_actual) || !std::isfinite(form.ppcg_season) ||
      !std::isfinite(form.ppcg_recent)) {
    throw ValidationError("PAR inputs must be finite");
  }
  config.validate();
  const double gap = ppg_predicted - ppg_actual;
  const double season = std::max(form.ppcg_season, config.denominator_floor);
  const double recent = std::max(form.ppcg_recent, config.denominator_floor);
  return gap / season + config.w_o * (gap / recent);
}

std::vector<ParEntry> par_leaderboard(const std::vector<ParInput>& players,
                                      const std::map<std::string, TeamForm>& forms, const ParConfig& config,
                                      std::size_t top) {
  config.validate();
  std::vector<std::string> unknown;
  for (const auto& p : players) {
    if (!forms.contains(p.team_id)) unknown.push_back(fmt::format("{} (team '{}')", p.player_id, p.team_id));
  }
  if (!unknown.empty()) {
    throw ValidationError(fmt::format("no team form for: {}", fmt::join(unknown, ", ")));
  }

  std::vector<ParEntry> board;
  board.reserve(players.size());
  for (const auto& p : players) {
    const TeamForm& form = forms.at(p.team_id);
    board.push_back(ParEntry{p.player_id, p.name, p.ppg_predicted, p.ppg_actual, form.ppcg_season,
                             form.ppcg_recent, par_score(p.ppg_predicted, p.ppg_actual, form, config)});
  }
  std::sort(board.begin(), board.end(), [](const ParEntry& a, const ParEntry& b) {
    if (a.par != b.par) return a.par > b.par;
    return a.player_id < b.player_id;
  });
  if (board.size() > top) board.resize(top);
  return board;
}

}  // namespace puckpar
