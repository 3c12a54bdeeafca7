#include "hcox/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/container_hash/hash.hpp>

#include "hcox/combinatorics.hpp"
#include "hcox/library.hpp"
#include "hcox/pasting.hpp"

namespace hcox {

namespace fs = std::filesystem;

namespace {

constexpr const char* kDeriveFile = "derive.jsonl";
constexpr const char* kLibrariesFile = "libraries.json";
constexpr const char* kSelcperFile = "selcper.txt";
constexpr const char* kSolveFile = "solve.jsonl";
constexpr const char* kCensusFile = "census.jsonl";
constexpr const char* kCsvFile = "census.csv";
constexpr const char* kReportFile = "report.json";

// Candidate sets larger than this go through the single-equation filter.
constexpr std::size_t kOneEquationThreshold = 100;

std::string hex_hash(const std::vector<std::string>& parts) {
  std::size_t seed = 0;
  for (const auto& p : parts) boost::hash_combine(seed, p);
  std::ostringstream os;
  os << std::hex << seed;
  return os.str();
}

std::vector<std::string> read_lines(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

// Writes through a temporary file so an interrupted run never leaves a
// truncated output behind.
void write_lines(const fs::path& file, const std::vector<std::string>& lines) {
  fs::create_directories(file.parent_path());
  const fs::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    for (const auto& l : lines) out << l << '\n';
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, file);
}

int label_number(const std::string& label) {
  if (label.size() < 2 || label[0] != 'P') return 0;
  return std::stoi(label.substr(1));
}

struct DerivedPolytope {
  CombinatorialPolytope polytope;
  bool admissible = false;
  IncidenceData incidence;
};

class Runner {
 public:
  explicit Runner(const PipelineConfig& cfg) : cfg_(cfg), out_(cfg.out) {}

  RunReport run() {
    RunReport report;
    for (Stage s : cfg_.stages) {
      log("stage " + to_string(s));
      const auto t0 = std::chrono::steady_clock::now();
      StageReport sr{s, 0, Json::object()};
      switch (s) {
        case Stage::Derive: sr.counts = derive(); break;
        case Stage::Libgen: sr.counts = libgen(); break;
        case Stage::Enumerate: sr.counts = enumerate(); break;
        case Stage::Solve: sr.counts = solve_stage(); break;
        case Stage::Certify: sr.counts = certify_stage(); break;
      }
      sr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      report.stages.push_back(std::move(sr));
    }
    compare(report);
    Json j = report.json();
    j["config"] = config_json();
    write_lines(out_ / kReportFile, {j.dump(2)});
    return report;
  }

 private:
  void log(const std::string& msg) const {
    if (cfg_.log) cfg_.log(msg);
  }

  fs::path require(const char* file, Stage producer) const {
    const fs::path p = out_ / file;
    if (!fs::exists(p))
      throw std::runtime_error(p.string() + " not found; run the " + to_string(producer) + " stage first");
    return p;
  }

  Json config_json() const {
    Json j;
    j["weight_cap"] = cfg_.weight_cap;
    j["k_max_angle"] = cfg_.k_max_angle;
    j["digits"] = cfg_.digits;
    j["tol_res"] = cfg_.tol_res;
    j["tol_zero"] = cfg_.tol_zero;
    j["threads"] = cfg_.threads;
    j["row_limit"] = cfg_.row_limit;
    j["seed"] = cfg_.seed;
    j["full_census"] = cfg_.full_census;
    j["input"] = cfg_.input.empty() ? "(bundled)" : cfg_.input;
    return j;
  }

  std::vector<int> selected_labels(const std::vector<DerivedPolytope>& derived) const {
    std::vector<int> labels;
    if (!cfg_.labels.empty()) {
      for (int k : cfg_.labels) {
        if (long_running(k) && !cfg_.full_census)
          throw std::invalid_argument("label " + std::to_string(k) + " runs only with --full-census");
        labels.push_back(k);
      }
      return labels;
    }
    for (const auto& d : derived) {
      const int k = label_number(d.polytope.label());
      if (d.admissible && k > 0 && (cfg_.full_census || !long_running(k))) labels.push_back(k);
    }
    return labels;
  }

  std::vector<DerivedPolytope> read_derived() const {
    std::vector<DerivedPolytope> out;
    for (const auto& line : read_lines(require(kDeriveFile, Stage::Derive))) {
      const Json j = Json::parse(line);
      DerivedPolytope d;
      d.polytope.id = j.at("id");
      d.polytope.brackets = j.at("brackets").get<std::vector<Tuple>>();
      if (j.at("label") != std::to_string(d.polytope.id)) d.polytope.source_name = j.at("label").get<std::string>();
      d.admissible = j.at("admissible");
      if (d.admissible) d.incidence = incidence_from_json(j.at("incidence"));
      out.push_back(std::move(d));
    }
    return out;
  }

  const DerivedPolytope& by_label(const std::vector<DerivedPolytope>& derived, int k) const {
    for (const auto& d : derived)
      if (d.admissible && label_number(d.polytope.label()) == k) return d;
    throw std::invalid_argument("no admissible polytope P" + std::to_string(k) + " in the input");
  }

  std::string label_of(const std::vector<DerivedPolytope>& derived, int id) const {
    for (const auto& d : derived)
      if (d.polytope.id == id) return d.polytope.label();
    return std::to_string(id);
  }

  Json derive() {
    const auto polytopes = cfg_.input.empty() ? bundled_polytopes() : load_polytopes(cfg_.input);
    std::vector<std::string> lines;
    int admissible = 0;
    Json f_vectors = Json::object();
    for (const auto& p : polytopes) {
      Json j;
      j["id"] = p.id;
      j["label"] = p.label();
      j["brackets"] = p.brackets;
      j["admissible"] = is_admissible(p);
      if (j["admissible"]) {
        ++admissible;
        const IncidenceData inc = derive_incidence(p);
        const std::string f = combinatorial_f_vector(p).str();
        j["f_vector"] = f;
        j["incidence"] = incidence_json(inc);
        f_vectors[p.label()] = {{"f_vector", f}, {"disjoint_pairs", inc.d.size()}};
      }
      lines.push_back(j.dump());
    }
    write_lines(out_ / kDeriveFile, lines);
    return {{"polytopes", polytopes.size()}, {"admissible", admissible}, {"labels", f_vectors}};
  }

  LibrarySet libraries() const {
    LibraryOptions opt;
    opt.weight_cap = cfg_.weight_cap;
    opt.threads = cfg_.threads;
    return build_libraries(opt, out_ / "cache" / "libraries");
  }

  Json libgen() {
    const LibrarySet libs = libraries();
    Json counts = Json::object();
    for (const auto* lib : libs.all()) counts[lib->name()] = lib->size();
    Json j{{"weight_cap", cfg_.weight_cap}, {"libraries", counts}};
    write_lines(out_ / kLibrariesFile, {j.dump(2)});
    return {{"libraries", counts}};
  }

  Json enumerate() {
    const auto derived = read_derived();
    std::ifstream lib_file(require(kLibrariesFile, Stage::Libgen));
    const Json lib_info = Json::parse(lib_file);
    if (lib_info.at("weight_cap") != cfg_.weight_cap)
      throw std::runtime_error("libraries were built with weight cap " + lib_info.at("weight_cap").dump() +
                               "; run the libgen stage again");
    std::optional<LibrarySet> libs;
    std::vector<std::string> lines;
    Json counts = Json::object();
    for (int k : selected_labels(derived)) {
      const DerivedPolytope& d = by_label(derived, k);
      const std::string key = hex_hash({"enumerate", Json(d.polytope.brackets).dump(), incidence_json(d.incidence).dump(),
                                        std::to_string(cfg_.weight_cap), std::to_string(cfg_.row_limit)});
      const fs::path cached = out_ / "cache" / "enumerate" / (key + ".txt");
      std::vector<std::string> block;
      if (fs::exists(cached)) {
        block = read_lines(cached);
        log("P" + std::to_string(k) + ": " + std::to_string(block.size()) + " vectors (cached)");
      } else {
        if (!libs) libs = libraries();
        PastingOptions opt;
        opt.row_limit = cfg_.row_limit;
        opt.threads = cfg_.threads;
        const SelcperSet s = enumerate_selcper(d.polytope, d.incidence, *libs, opt);
        for (const auto& v : s.vectors) block.push_back(selcper_line({d.polytope.id, v}));
        write_lines(cached, block);
        log("P" + std::to_string(k) + ": " + std::to_string(block.size()) + " vectors");
      }
      counts["P" + std::to_string(k)] = {{"selcper", block.size()}};
      lines.insert(lines.end(), block.begin(), block.end());
    }
    write_lines(out_ / kSelcperFile, lines);
    return {{"labels", counts}};
  }

  Json solve_stage() {
    const auto vectors = read_selcper(require(kSelcperFile, Stage::Enumerate).string());
    const auto derived = read_derived();
    SolveConfig scfg = solve_config(cfg_);
    std::vector<std::string> lines;
    Json counts = Json::object();
    for (std::size_t begin = 0; begin < vectors.size();) {
      std::size_t end = begin;
      while (end < vectors.size() && vectors[end].polytope_id == vectors[begin].polytope_id) ++end;
      const int id = vectors[begin].polytope_id;
      const std::string label = label_of(derived, id);
      scfg.one_equation = end - begin > kOneEquationThreshold;

      std::vector<std::string> key_parts{"solve",          std::to_string(scfg.k_max),  std::to_string(scfg.digits),
                                         scfg.tol_res,     scfg.tol_zero,               std::to_string(scfg.seed),
                                         std::to_string(scfg.angle_lower), std::to_string(scfg.x_max),
                                         std::to_string(scfg.newton_starts), std::to_string(scfg.one_equation),
                                         std::to_string(scfg.box_budget)};
      for (std::size_t i = begin; i < end; ++i) key_parts.push_back(selcper_line(vectors[i]));
      const fs::path cached = out_ / "cache" / "solve" / (hex_hash(key_parts) + ".jsonl");

      std::vector<std::string> block;
      const bool hit = fs::exists(cached);
      if (hit) {
        block = read_lines(cached);
      } else {
        block.resize(end - begin);
        parallel_for(end - begin, cfg_.threads, [&](std::size_t i) {
          const auto& t = vectors[begin + i];
          block[i] = outcome_json(t.polytope_id, t.vector, solve(t.vector, scfg)).dump();
        });
        write_lines(cached, block);
      }

      Json c{{"candidates", end - begin}, {"accepted", 0}, {"rejected", Json::object()}, {"unproved", 0}};
      for (const auto& line : block) {
        const Json j = Json::parse(line);
        if (j["outcome"] == "Accepted") {
          c["accepted"] = c["accepted"].get<int>() + 1;
          continue;
        }
        const std::string stage = j["stage"];
        c["rejected"][stage] = c["rejected"].value(stage, 0) + 1;
        if (!j["proved"].get<bool>()) c["unproved"] = c["unproved"].get<int>() + 1;
        if (j["k_cap_hit"].get<bool>()) c["k_cap_hit"] = c.value("k_cap_hit", 0) + 1;
      }
      log(label + ": " + std::to_string(c["accepted"].get<int>()) + " of " + std::to_string(end - begin) + " accepted" +
          (hit ? " (cached)" : ""));
      counts[label] = c;
      lines.insert(lines.end(), block.begin(), block.end());
      begin = end;
    }
    write_lines(out_ / kSolveFile, lines);
    return {{"labels", counts}};
  }

  Json certify_stage() {
    const auto lines = read_lines(require(kSolveFile, Stage::Solve));
    const auto derived = read_derived();
    struct Job {
      int id;
      int index;
      CoxeterVector vector;
      SolveOutcome outcome;
    };
    std::vector<Job> jobs;
    std::map<int, int> next_index;
    for (const auto& line : lines) {
      const Json j = Json::parse(line);
      if (j.at("outcome") != "Accepted") continue;
      const int id = j.at("polytope_id");
      jobs.push_back({id, ++next_index[id], CoxeterVector::parse(j.at("vector").get<std::string>()), outcome_from_json(j)});
    }
    std::map<int, const CombinatorialPolytope*> polytope;
    for (const auto& d : derived) polytope[d.polytope.id] = &d.polytope;

    std::vector<std::optional<PolytopeRecord>> records(jobs.size());
    std::vector<std::string> errors(jobs.size());
    parallel_for(jobs.size(), cfg_.threads, [&](std::size_t i) {
      const Job& job = jobs[i];
      try {
        records[i] = certify(*polytope.at(job.id), job.vector, job.outcome, job.index);
      } catch (const CertificationError& e) {
        errors[i] = e.what();
      }
    });

    std::vector<std::string> jsonl, csv{csv_header()};
    Json counts = Json::object();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const std::string label = label_of(derived, jobs[i].id);
      Json& c = counts[label];
      if (c.is_null()) c = {{"records", 0}, {"noncompact", 0}, {"compact", 0}, {"arithmetic", 0}, {"failures", 0}};
      if (!records[i]) {
        log(label + " " + jobs[i].vector.str() + ": certification failed: " + errors[i]);
        c["failures"] = c["failures"].get<int>() + 1;
        continue;
      }
      const PolytopeRecord& r = *records[i];
      c["records"] = c["records"].get<int>() + 1;
      c[r.compact ? "compact" : "noncompact"] = c[r.compact ? "compact" : "noncompact"].get<int>() + 1;
      if (r.arithmetic == Arithmeticity::Arithmetic) c["arithmetic"] = c["arithmetic"].get<int>() + 1;
      if (r.arithmetic == Arithmeticity::Inconclusive) c["inconclusive"] = c.value("inconclusive", 0) + 1;
      jsonl.push_back(record_json(r, label).dump());
      csv.push_back(record_csv(r, label));
    }
    write_lines(out_ / kCensusFile, jsonl);
    write_lines(out_ / kCsvFile, csv);
    int total = 0, compact = 0;
    for (const auto& [label, c] : counts.items()) {
      total += c["records"].get<int>();
      compact += c["compact"].get<int>();
    }
    return {{"labels", counts}, {"totals", {{"records", total}, {"compact", compact}, {"noncompact", total - compact}}}};
  }

  void compare(RunReport& report) const {
    const Json expected = load_expected_counts();
    Json cmp = Json::object();
    auto check = [&](const std::string& group, const std::string& field, const Json& want, const Json& got) {
      cmp[group][field] = {{"expected", want}, {"observed", got}};
      if (want != got) report.matches_expected = false;
    };
    bool all_labels = true;
    for (const auto& sr : report.stages) {
      const Json& c = sr.counts;
      switch (sr.stage) {
        case Stage::Derive:
          if (!cfg_.input.empty()) break;
          check("derive", "polytopes", expected["polytopes"], c["polytopes"]);
          check("derive", "admissible", expected["admissible"], c["admissible"]);
          for (const auto& [label, v] : c["labels"].items()) {
            check(label, "f_vector", expected["labels"][label]["f_vector"], v["f_vector"]);
            check(label, "disjoint_pairs", expected["labels"][label]["disjoint_pairs"], v["disjoint_pairs"]);
          }
          break;
        case Stage::Libgen:
          if (cfg_.weight_cap != 7) break;
          for (const auto& [name, n] : expected["libraries"].items()) check("libraries", name, n, c["libraries"][name]);
          break;
        case Stage::Enumerate:
          for (const auto& [label, v] : c["labels"].items())
            check(label, "selcper", expected["labels"][label]["selcper"], v["selcper"]);
          break;
        case Stage::Solve:
          for (const auto& [label, v] : c["labels"].items())
            check(label, "accepted", expected["labels"][label]["accepted"], v["accepted"]);
          break;
        case Stage::Certify:
          for (const auto& [label, v] : c["labels"].items()) {
            check(label, "noncompact", expected["labels"][label]["noncompact"], v["noncompact"]);
            check(label, "compact", expected["labels"][label]["compact"], v["compact"]);
          }
          for (const auto& [label, v] : expected["labels"].items())
            if (!c["labels"].contains(label) && v["accepted"] != 0) all_labels = false;
          if (all_labels)
            for (const auto& [field, n] : expected["totals"].items()) check("totals", field, n, c["totals"][field]);
          break;
      }
    }
    report.comparison = cmp;
  }

  const PipelineConfig& cfg_;
  fs::path out_;
};

}  // namespace

std::string to_string(Stage s) {
  switch (s) {
    case Stage::Derive: return "derive";
    case Stage::Libgen: return "libgen";
    case Stage::Enumerate: return "enumerate";
    case Stage::Solve: return "solve";
    case Stage::Certify: return "certify";
  }
  return "?";
}

Stage parse_stage(std::string_view name) {
  for (Stage s : all_stages())
    if (to_string(s) == name) return s;
  throw std::invalid_argument("unknown stage: " + std::string(name));
}

std::vector<Stage> all_stages() { return {Stage::Derive, Stage::Libgen, Stage::Enumerate, Stage::Solve, Stage::Certify}; }

bool long_running(int label) { return label >= 12 && label <= 14; }

void validate(const PipelineConfig& cfg) {
  if (cfg.weight_cap < 6) throw std::invalid_argument("weight cap must be at least 6");
  if (cfg.weight_cap > 14) throw std::invalid_argument("weight cap must be at most 14");
  if (cfg.digits < 30 || cfg.digits > 100) throw std::invalid_argument("digits must lie in [30, 100]");
  if (cfg.k_max_angle < 7) throw std::invalid_argument("k max must be at least 7");
  if (cfg.threads < 1) throw std::invalid_argument("threads must be positive");
  if (cfg.row_limit == 0) throw std::invalid_argument("row limit must be positive");
}

SolveConfig solve_config(const PipelineConfig& cfg) {
  SolveConfig s;
  s.k_max = cfg.k_max_angle;
  s.digits = cfg.digits;
  s.tol_res = cfg.tol_res;
  s.tol_zero = cfg.tol_zero;
  s.seed = cfg.seed;
  return s;
}

Json RunReport::json() const {
  Json j;
  Json st = Json::array();
  for (const auto& s : stages) st.push_back({{"stage", to_string(s.stage)}, {"seconds", s.seconds}, {"counts", s.counts}});
  j["stages"] = st;
  j["comparison"] = comparison;
  j["matches_expected"] = matches_expected;
  return j;
}

RunReport run(const PipelineConfig& cfg) {
  validate(cfg);
  fs::create_directories(cfg.out);
  return Runner(cfg).run();
}

Json load_expected_counts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return Json::parse(in);
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(std::size_t(std::max(threads, 1)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace hcox
