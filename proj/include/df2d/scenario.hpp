#pragma once

#include <filesystem>
#include <string>

#include "df2d/defect_force.hpp"

namespace df2d {

struct ScenarioResult {
    int exit_status = 0;
    std::string report_text;
    std::string result_json; // serialized structured record
};

// Parse and run one scenario file (JSON; see README for the schema), writing
// report.txt, result.json and any requested grid files into out_dir.
// A non-empty task_filter restricts execution to tasks of that name
// (CLI subcommand = task); an empty filter runs every task.
ScenarioResult run_scenario(const std::filesystem::path& scenario_path,
                            const std::filesystem::path& out_dir,
                            const std::string& task_filter = "");

// Row-major CSV grid of the smooth part of a field; refuses cells inside the
// guard radius around O.
void render_grid(const SingularField& F, int nx, int ny, double xmin, double xmax,
                 double ymin, double ymax, double guard_radius,
                 const std::filesystem::path& out_file);

} // namespace df2d
