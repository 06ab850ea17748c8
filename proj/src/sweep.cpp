#include "csf/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <thread>

namespace csf {

using json = nlohmann::json;

void SweepConfig::validate() const {
  require(!output_dir.empty(), ErrorCode::InvalidConfig, "sweep output_dir must be set");
  for (double v : grid.L) require(v > 0.0, ErrorCode::InvalidConfig, "grid L must be positive");
  for (double v : grid.B) require(v > 0.0, ErrorCode::InvalidConfig, "grid B must be positive");
  for (double v : grid.h) require(v > 0.0, ErrorCode::InvalidConfig, "grid h must be positive");
  require(grid.B.empty() || base.ladder.n >= 1, ErrorCode::InvalidConfig, "grid B needs ladder n >= 1");
}

SweepConfig sweep_config_from_json(const json& j) {
  require(j.is_object(), ErrorCode::InvalidConfig, "sweep config must be an object");
  for (const auto& item : j.items()) {
    const std::string& k = item.key();
    require(k == "base" || k == "grid" || k == "output_dir" || k == "threads", ErrorCode::InvalidConfig,
            "unknown key '" + k + "' in sweep config");
  }
  SweepConfig c;
  c.base = scenario_config_from_json(j.value("base", json::object()));
  try {
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      for (const auto& item : g.items()) {
        const std::string& k = item.key();
        require(k == "L" || k == "B" || k == "alpha" || k == "N" || k == "h", ErrorCode::InvalidConfig,
                "unknown key '" + k + "' in grid");
      }
      if (g.contains("L")) c.grid.L = g.at("L").get<std::vector<double>>();
      if (g.contains("B")) c.grid.B = g.at("B").get<std::vector<double>>();
      if (g.contains("alpha")) c.grid.alpha = g.at("alpha").get<std::vector<double>>();
      if (g.contains("N")) c.grid.N = g.at("N").get<std::vector<std::size_t>>();
      if (g.contains("h")) c.grid.h = g.at("h").get<std::vector<double>>();
    }
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidConfig, e.what());
  }
  c.validate();
  return c;
}

std::vector<SweepCell> sweep_cells(const SweepConfig& cfg) {
  auto or_base = [](const auto& list, auto base) {
    using T = decltype(base);
    return list.empty() ? std::vector<T>{base} : std::vector<T>(list.begin(), list.end());
  };
  const ScenarioConfig& b = cfg.base;
  const int n = b.ladder.n;
  const double B0 = n >= 1 && b.ladder.B.size() >= static_cast<std::size_t>(n) ? b.ladder.B[n - 1] : 0.0;
  const double a0 = b.alpha.empty() ? 0.0 : b.alpha.front();

  std::vector<SweepCell> cells;
  for (double L : or_base(cfg.grid.L, b.ladder.L))
    for (double B : or_base(cfg.grid.B, B0))
      for (double alpha : or_base(cfg.grid.alpha, a0))
        for (std::size_t N : or_base(cfg.grid.N, b.N))
          for (double h : or_base(cfg.grid.h, b.h)) {
            SweepCell cell;
            char dir[32];
            std::snprintf(dir, sizeof dir, "cell_%03zu", cells.size());
            cell.dir = dir;
            cell.config = b;
            cell.config.ladder.L = L;
            if (!cfg.grid.B.empty()) cell.config.ladder.B[n - 1] = B;
            if (!cfg.grid.alpha.empty()) cell.config.alpha = {alpha};
            cell.config.N = N;
            cell.config.h = h;
            cell.config.output_dir = (std::filesystem::path(cfg.output_dir) / dir).string();
            cell.params = {{"L", L}, {"N", N}, {"h", h}};
            if (!cfg.grid.B.empty()) cell.params["B"] = B;
            if (!cfg.grid.alpha.empty()) cell.params["alpha"] = alpha;
            cells.push_back(std::move(cell));
          }
  return cells;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const std::vector<SweepCell> cells = sweep_cells(cfg);
  std::vector<json> entries(cells.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const SweepCell& cell = cells[i];
      json e = {{"dir", cell.dir}, {"params", cell.params}};
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const ScenarioReport rep = run_scenario(cell.config);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_report(rep, (std::filesystem::path(cell.config.output_dir) / "report.json").string(), wall);
        std::size_t ok = 0;
        for (const Verdict& v : rep.verdicts) ok += v.passed ? 1 : 0;
        e["status"] = to_string(rep.status());
        e["verdicts_passed"] = ok;
        e["verdicts_total"] = rep.verdicts.size();
        e["report"] = cell.dir + "/report.json";
      } catch (const std::exception& ex) {
        e["status"] = "ERROR";
        e["error"] = ex.what();
      }
      entries[i] = std::move(e);
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, cells.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SweepResult res;
  json list = json::array();
  for (json& e : entries) {
    const std::string s = e.at("status");
    if (s == "PASS")
      ++res.passed;
    else if (s == "UNRESOLVED")
      ++res.unresolved;
    else
      ++res.failed;
    list.push_back(std::move(e));
  }
  res.manifest = {{"schema", "csf-manifest/1"},
                  {"scenario", cfg.base.scenario},
                  {"base", scenario_config_to_json(cfg.base)},
                  {"cells", list},
                  {"summary", {{"cells", cells.size()}, {"passed", res.passed}, {"failed", res.failed},
                               {"unresolved", res.unresolved}}}};
  json out = res.manifest;
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  out["run_info"] = {{"generated_at", stamp}};
  write_file_atomic((std::filesystem::path(cfg.output_dir) / "manifest.json").string(), out.dump(2) + "\n");
  return res;
}

}  // namespace csf
