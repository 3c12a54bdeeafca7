#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "hcox/diagrams.hpp"
#include "hcox/pipeline.hpp"

namespace {

using namespace hcox;

void print_report(const RunReport& r) {
  for (const auto& s : r.stages) {
    std::cout << to_string(s.stage) << " (" << s.seconds << " s)\n";
    if (s.counts.contains("labels"))
      for (const auto& [label, c] : s.counts["labels"].items()) std::cout << "  " << label << " " << c.dump() << "\n";
    for (const char* key : {"polytopes", "admissible", "libraries", "totals"})
      if (s.counts.contains(key)) std::cout << "  " << key << " " << s.counts[key].dump() << "\n";
  }
  for (const auto& [group, fields] : r.comparison.items())
    for (const auto& [field, v] : fields.items())
      if (v["expected"] != v["observed"])
        std::cout << "mismatch " << group << "." << field << ": expected " << v["expected"].dump() << ", observed "
                  << v["observed"].dump() << "\n";
  std::cout << "matches expected counts: " << (r.matches_expected ? "yes" : "no") << "\n";
}

std::vector<std::string> short_lengths(const Json& record) {
  std::vector<std::string> out;
  for (const auto& l : record.at("lengths")) out.push_back(l.get<std::string>().substr(0, 8));
  return out;
}

int export_dot(const std::vector<std::string>& vectors, const std::string& census, const std::string& out_dir) {
  std::vector<std::pair<std::string, std::string>> graphs;  // name, text
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const std::string name = "v" + std::to_string(i + 1);
    graphs.emplace_back(name, to_dot(CoxeterVector::parse(vectors[i]), {}, name));
  }
  if (!census.empty()) {
    std::ifstream in(census);
    if (!in) throw std::runtime_error("cannot open " + census);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const Json j = Json::parse(line);
      const std::string name = j.at("label").get<std::string>() + "." + std::to_string(j.at("index").get<int>());
      graphs.emplace_back(name, to_dot(CoxeterVector::parse(j.at("vector").get<std::string>()), short_lengths(j), name));
    }
  }
  if (out_dir.empty()) {
    for (const auto& [name, text] : graphs) std::cout << text;
    return 0;
  }
  std::filesystem::create_directories(out_dir);
  for (const auto& [name, text] : graphs) std::ofstream(std::filesystem::path(out_dir) / (name + ".dot")) << text;
  std::cout << graphs.size() << " graphs written to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Census of finite-volume hyperbolic Coxeter 4-polytopes with 7 facets"};
  app.require_subcommand(1);
  app.fallthrough();

  PipelineConfig cfg;
  bool quiet = false;
  auto* g = app.add_option_group("pipeline");
  g->add_option("--input", cfg.input, "Polytope file (default: bundled data)")->envname("CENSUS_INPUT");
  g->add_option("--out", cfg.out, "Output directory")->envname("CENSUS_OUT")->capture_default_str();
  g->add_option("--weight-cap", cfg.weight_cap, "Largest enumerated weight")->envname("CENSUS_WEIGHT_CAP")->capture_default_str();
  g->add_option("--k-max-angle", cfg.k_max_angle, "Largest k scanned for angle unknowns")
      ->envname("CENSUS_K_MAX_ANGLE")
      ->capture_default_str();
  g->add_option("--digits", cfg.digits, "Working precision in decimal digits")->envname("CENSUS_DIGITS")->capture_default_str();
  g->add_option("--tol-res", cfg.tol_res, "Residual tolerance")->envname("CENSUS_TOL_RES")->capture_default_str();
  g->add_option("--tol-zero", cfg.tol_zero, "Eigenvalue zero band")->envname("CENSUS_TOL_ZERO")->capture_default_str();
  g->add_option("--threads", cfg.threads, "Thread budget")->envname("CENSUS_THREADS")->capture_default_str();
  g->add_option("--row-limit", cfg.row_limit, "Pasting row limit")->envname("CENSUS_ROW_LIMIT")->capture_default_str();
  g->add_option("--seed", cfg.seed, "Seed for multistart Newton")->envname("CENSUS_SEED")->capture_default_str();
  g->add_option("--labels", cfg.labels, "Admissible labels to run, e.g. 2,16")->delimiter(',')->envname("CENSUS_LABELS");
  g->add_flag("--full-census", cfg.full_census, "Also run the long labels 12, 13, 14")->envname("CENSUS_FULL_CENSUS");
  g->add_flag("--quiet", quiet, "No progress log");

  std::vector<std::pair<CLI::App*, std::vector<Stage>>> stage_commands;
  for (Stage s : all_stages())
    stage_commands.emplace_back(app.add_subcommand(to_string(s), "Run the " + to_string(s) + " stage"), std::vector{s});
  stage_commands.emplace_back(app.add_subcommand("all", "Run every stage"), all_stages());

  std::vector<std::string> dot_vectors;
  std::string dot_census, dot_out;
  auto* dot = app.add_subcommand("export-dot", "Write Coxeter diagrams as Graphviz text");
  dot->add_option("vectors", dot_vectors, "Coxeter vectors, e.g. 2,3,inf,...");
  dot->add_option("--census", dot_census, "census.jsonl to export");
  dot->add_option("--dir", dot_out, "Directory for one .dot file per graph (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*dot) return export_dot(dot_vectors, dot_census, dot_out);
    for (const auto& [cmd, stages] : stage_commands)
      if (*cmd) cfg.stages = stages;
    if (!quiet) cfg.log = [](const std::string& m) { std::cerr << m << std::endl; };
    print_report(run(cfg));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
