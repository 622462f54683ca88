#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "curtainlab/geometry.hpp"
#include "curtainlab/separation.hpp"

namespace curtainlab {

// A scenario document fully determines a run: space, kappa, pool, experiment,
// seed, out_dir. Files are UTF-8 JSON with fixed field names.

struct SpaceHandle {
    std::shared_ptr<const Space> space;
    std::shared_ptr<StripSpace> strip; // set when kind == strip
    std::optional<Fig2Model> fig2;     // set when kind == figure2
    std::string kind;
};

SpaceHandle make_space(const std::string& kind, const std::string& params_json);

// default probe family per space kind; extent scales with the experiment
// window (plane probe length, h2 axis range, strip axis reach)
CurtainPool make_preset_pool(const SpaceHandle& h, double density, std::size_t cap,
                             double extent, int L_max);

// per-kind coordinate syntax: plane/h2/strip/figure2 "x,y"; tree "edge:off"
Point parse_point(const SpaceHandle& h, const std::string& text);

struct ScenarioOutcome {
    int exit_code = 0; // 0 ok, 2 validation failure, 3 check violation
    std::string message;
};

// overrides: "seed" and "out_dir" replace scenario fields when present
ScenarioOutcome run_scenario_file(const std::string& path,
                                  const std::map<std::string, std::string>& overrides,
                                  bool check);

ScenarioOutcome run_scenario_text(const std::string& json_text,
                                  const std::map<std::string, std::string>& overrides,
                                  bool check);

} // namespace curtainlab
