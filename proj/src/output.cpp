#include "adslab/output.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"

#ifndef ADSLAB_VERSION
#define ADSLAB_VERSION "0.0.0"
#endif

namespace adslab {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_step_rows(std::ostream& out, std::span<const StepRecord> rows) {
  for (const auto& r : rows) {
    out << r.trial << ',' << r.t << ',' << r.learner << ',' << r.env << ',' << r.action << ','
        << format_double(r.reward) << ',' << format_double(r.extra) << '\n';
  }
}

void write_drift_rows(std::ostream& out, std::span<const DriftSnapshot> rows) {
  for (const auto& d : rows) {
    out << d.trial << ',' << d.t << ',' << d.learner << ',' << format_double(d.accuracy) << ','
        << format_double(d.concept_shift) << ',' << format_double(d.covariate_shift) << '\n';
  }
}

std::string summary_header() {
  return "config_hash,trial,point,replicate,seed,env,learner,outer,population,interval,swap,"
         "beta,beta_label,alpha1,alpha2,final_cooperation,q_cooperate,q_defect,mean_theta,"
         "mean_lr,final_y1,final_y2,window_y1,window_y2,accuracy_auc,final_accuracy,"
         "final_concept_shift,final_covariate_shift,final_max_user_prob,saturation_step,failing";
}

namespace {

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

struct MeanErr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

MeanErr mean_stderr(const std::vector<double>& v) {
  MeanErr out;
  out.mean = mean_of(v);
  if (v.size() < 2) return out;
  double ss = 0.0;
  for (double x : v) ss += (x - out.mean) * (x - out.mean);
  const double n = static_cast<double>(v.size());
  out.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return out;
}

}  // namespace

std::string summary_row(const std::string& hash, std::size_t point, const TrialConfig& cfg,
                        const TrialSummary& s, double failure_threshold) {
  const bool rl = cfg.env == EnvKind::kRl;
  const bool sl = cfg.env == EnvKind::kSl;
  const bool content = cfg.env == EnvKind::kContent;
  const bool q = cfg.learner == LearnerKind::kQLearning;
  auto num = [](bool present, double v) { return present ? format_double(v) : std::string(); };

  const double window_y1 = mean_of(s.learner_y1);
  const double window_y2 = mean_of(s.learner_y2);
  std::string failing;
  if (rl) failing = s.final_cooperation > failure_threshold ? "1" : "0";
  if (sl) failing = window_y2 > 0.5 ? "1" : "0";

  std::ostringstream o;
  o << hash << ',' << cfg.trial_id << ',' << point << ',' << cfg.replicate << ',' << cfg.seed
    << ',' << to_string(cfg.env) << ',' << to_string(cfg.learner) << ','
    << to_string(cfg.outer.kind) << ',' << cfg.population << ',' << cfg.outer.interval << ','
    << (cfg.swap ? 1 : 0) << ',' << num(rl, cfg.beta) << ','
    << (rl ? std::string(beta_label(cfg.beta)) : std::string()) << ','
    << num(content, cfg.content.alpha1) << ',' << num(content, cfg.content.alpha2) << ','
    << num(rl, s.final_cooperation) << ',' << num(q, s.q_cooperate) << ','
    << num(q, s.q_defect) << ',' << num(rl && !q, s.mean_theta) << ','
    << num(!q, s.mean_lr) << ',' << num(sl, s.final_y1) << ',' << num(sl, s.final_y2) << ','
    << num(sl, window_y1) << ',' << num(sl, window_y2) << ',' << num(content, s.accuracy_auc)
    << ',' << num(content, s.final_accuracy) << ',' << num(content, s.final_concept_shift)
    << ',' << num(content, s.final_covariate_shift) << ','
    << num(content, s.final_max_user_prob) << ','
    << (content ? std::to_string(s.saturation_step) : std::string()) << ',' << failing;
  return o.str();
}

// ---------------------------------------------------------------------------
// CSV reading

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error("csv: no column '" + std::string(name) + "'");
}

namespace {

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      return out;
    }
    out.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error("csv: not a number: '" + s + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error("csv: not an integer: '" + s + "'");
  }
  return v;
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  bool first = true;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    if (first) {
      t.header = split(line);
      first = false;
      continue;
    }
    auto row = split(line);
    if (row.size() != t.header.size()) {
      throw Error("csv: row has " + std::to_string(row.size()) + " fields, header has " +
                  std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable read_csv(const fs::path& path) {
  try {
    return parse_csv(read_file(path));
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Aggregates over summary.csv

namespace {

const char* kPointColumns[] = {"env",  "learner", "outer",      "population", "interval",
                               "swap", "beta",    "beta_label", "alpha1",     "alpha2"};

std::string metric_for(const std::string& env) {
  if (env == "rl") return "final_cooperation";
  if (env == "sl") return "window_y2";
  return "final_accuracy";
}

// Rows grouped by point, in point order.
std::map<std::uint64_t, std::vector<const std::vector<std::string>*>> by_point(
    const CsvTable& summary) {
  std::map<std::uint64_t, std::vector<const std::vector<std::string>*>> out;
  const std::size_t pc = summary.column("point");
  for (const auto& row : summary.rows) out[to_u64(row[pc])].push_back(&row);
  return out;
}

}  // namespace

std::string failure_table(const CsvTable& summary) {
  std::ostringstream o;
  o << "point";
  for (const char* c : kPointColumns) o << ',' << c;
  o << ",seeds,failures,failure_rate,metric,metric_mean,metric_stderr\n";
  const std::size_t fail_col = summary.column("failing");
  const std::size_t env_col = summary.column("env");
  for (const auto& [point, rows] : by_point(summary)) {
    const auto& first = *rows.front();
    o << point;
    for (const char* c : kPointColumns) o << ',' << first[summary.column(c)];
    std::size_t failures = 0;
    bool flagged = false;
    std::vector<double> metric;
    const std::string metric_name = metric_for(first[env_col]);
    const std::size_t mc = summary.column(metric_name);
    for (const auto* row : rows) {
      if (!(*row)[fail_col].empty()) {
        flagged = true;
        failures += (*row)[fail_col] == "1" ? 1 : 0;
      }
      metric.push_back(to_double((*row)[mc]));
    }
    const MeanErr me = mean_stderr(metric);
    const double n = static_cast<double>(rows.size());
    o << ',' << rows.size() << ',' << (flagged ? std::to_string(failures) : "") << ','
      << (flagged ? format_double(static_cast<double>(failures) / n) : "") << ','
      << metric_name << ',' << format_double(me.mean) << ',' << format_double(me.stderr_) << '\n';
  }
  return o.str();
}

// ---------------------------------------------------------------------------
// Running

namespace {

struct TrialOutput {
  std::string steps;
  std::string drift;
  std::string cooperation;
  std::string summary;
  std::string error;  // empty on success
};

TrialOutput run_one(const TrialConfig& cfg, std::size_t point, const std::string& hash,
                    double failure_threshold) {
  TrialOutput out;
  try {
    const TrialResult r = run_trial(cfg);
    std::ostringstream steps, drift, coop;
    write_step_rows(steps, r.steps);
    write_drift_rows(drift, r.drift);
    for (const auto& [t, c] : r.cooperation_series) {
      coop << cfg.trial_id << ',' << t << ',' << format_double(c) << '\n';
    }
    out.steps = steps.str();
    out.drift = drift.str();
    out.cooperation = coop.str();
    out.summary = summary_row(hash, point, cfg, r.summary, failure_threshold) + "\n";
  } catch (const std::exception& e) {
    out = TrialOutput{};
    out.error = e.what();
  }
  return out;
}

class OutFile {
 public:
  OutFile(const fs::path& path, std::string_view header)
      : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw Error("cannot write '" + path.string() + "'");
    out_ << header << '\n';
  }
  void write(std::string_view text) {
    out_ << text;
    if (!out_) throw Error("write failed for '" + path_.string() + "'");
  }
  void close() {
    out_.close();
    if (!out_) throw Error("write failed for '" + path_.string() + "'");
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

json point_json(const SweepPoint& p) {
  const TrialConfig& c = p.config;
  return {{"index", p.index},
          {"outer", std::string(to_string(c.outer.kind))},
          {"population", c.population},
          {"interval", c.outer.interval},
          {"swap", c.swap},
          {"beta", c.beta},
          {"alpha1", c.content.alpha1},
          {"alpha2", c.content.alpha2}};
}

json manifest_base(const ExperimentConfig& cfg, const std::string& hash) {
  json m;
  m["config_hash"] = hash;
  m["code_version"] = ADSLAB_VERSION;
  m["preset"] = cfg.preset;
  m["scenario"] = std::string(to_string(cfg.scenario));
  m["config"] = json::parse(canonical_json(cfg));
  m["seeds"] = cfg.seeds();
  return m;
}

RunOutcome run_walkthrough(const ExperimentConfig& cfg, const fs::path& dir,
                           const std::string& hash) {
  const Walkthrough w = run_pbt_walkthrough(cfg.seed, cfg.walkthrough_intervals, 0);
  std::ostringstream steps, trace;
  steps << kStepsHeader << '\n';
  write_step_rows(steps, w.steps);
  trace << kWalkthroughHeader << '\n';
  for (const auto& iv : w.intervals) {
    for (std::size_t i = 0; i < iv.actions.size(); ++i) {
      long long donor = -1;
      for (const auto& [recipient, from] : iv.copies) {
        if (recipient == i) donor = static_cast<long long>(from);
      }
      trace << iv.t << ',' << i << ',' << to_string(iv.actions[i]) << ','
            << format_double(iv.rewards[i]) << ',' << donor << '\n';
    }
  }
  write_file(dir / "steps.csv", steps.str());
  write_file(dir / "walkthrough.csv", trace.str());

  RunOutcome outcome;
  outcome.trials = 1;
  outcome.config_hash = hash;
  outcome.files = {"steps.csv", "walkthrough.csv"};
  json m = manifest_base(cfg, hash);
  m["points"] = json::array();
  m["trials"] = json::array({{{"trial", 0}, {"point", 0}, {"replicate", 0}, {"seed", cfg.seed},
                              {"status", "ok"}}});
  m["failed"] = 0;
  m["files"] = outcome.files;
  write_file(dir / "manifest.json", m.dump(2) + "\n");
  return outcome;
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  cfg.validate();
  const fs::path dir = options.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
  const std::string hash = config_hash(cfg);
  if (cfg.scenario == Scenario::kPbtWalkthrough) return run_walkthrough(cfg, dir, hash);

  const auto points = sweep_points(cfg);
  const auto trials = expand_trials(cfg);
  const std::size_t n = trials.size();

  OutFile steps(dir / "steps.csv", kStepsHeader);
  OutFile drift(dir / "drift.csv", kDriftHeader);
  OutFile coop(dir / "cooperation.csv", kCooperationHeader);
  OutFile summary(dir / "summary.csv", summary_header());

  // Finished trials are buffered until every earlier trial is written, so
  // file contents follow trial order whatever the completion order.
  std::vector<std::optional<TrialOutput>> done(n);
  std::vector<std::string> errors(n);
  std::size_t cursor = 0;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::exception_ptr io_error;

  auto flush = [&] {
    while (cursor < n && done[cursor]) {
      TrialOutput& o = *done[cursor];
      errors[cursor] = o.error;
      steps.write(o.steps);
      drift.write(o.drift);
      coop.write(o.cooperation);
      summary.write(o.summary);
      done[cursor].reset();
      ++cursor;
    }
  };
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      const std::size_t point = trials[i].trial_id / cfg.n_seeds;
      TrialOutput o = run_one(trials[i], point, hash, cfg.failure_threshold);
      std::lock_guard lock(mu);
      done[i] = std::move(o);
      try {
        flush();
      } catch (...) {
        if (!io_error) io_error = std::current_exception();
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (io_error) std::rethrow_exception(io_error);
  steps.close();
  drift.close();
  coop.close();
  summary.close();

  const CsvTable table = read_csv(dir / "summary.csv");
  write_file(dir / "failure_rates.csv", failure_table(table));

  RunOutcome outcome;
  outcome.trials = n;
  outcome.config_hash = hash;
  outcome.files = {"steps.csv", "drift.csv", "cooperation.csv", "summary.csv",
                   "failure_rates.csv"};
  json m = manifest_base(cfg, hash);
  m["points"] = json::array();
  for (const auto& p : points) m["points"].push_back(point_json(p));
  m["trials"] = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json t = {{"trial", trials[i].trial_id},
              {"point", trials[i].trial_id / cfg.n_seeds},
              {"replicate", trials[i].replicate},
              {"seed", trials[i].seed},
              {"status", errors[i].empty() ? "ok" : "error"}};
    if (!errors[i].empty()) {
      t["error"] = errors[i];
      ++outcome.failed;
    }
    m["trials"].push_back(std::move(t));
  }
  m["failed"] = outcome.failed;
  m["files"] = outcome.files;
  write_file(dir / "manifest.json", m.dump(2) + "\n");
  return outcome;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

std::string point_prefix(const CsvTable& summary, const std::vector<std::string>& row) {
  std::string s;
  for (const char* c : {"outer", "population", "interval", "swap", "alpha1", "alpha2"}) {
    s += ',' + row[summary.column(c)];
  }
  return s;
}

constexpr const char* kPointHeader = "point,outer,population,interval,swap,alpha1,alpha2";

void qlearning_panel(const CsvTable& summary, const fs::path& out, ReportOutcome& report) {
  const std::size_t learner = summary.column("learner");
  std::ostringstream o;
  o << "trial," << kPointHeader << ",seed,final_cooperation,q_cooperate,q_defect,failing\n";
  bool any = false;
  for (const auto& [point, rows] : by_point(summary)) {
    std::size_t failing = 0;
    std::size_t total = 0;
    for (const auto* row : rows) {
      if ((*row)[learner] != "qlearning") continue;
      any = true;
      ++total;
      const double coop = to_double((*row)[summary.column("final_cooperation")]);
      const bool fails = coop > 0.6;
      failing += fails ? 1 : 0;
      o << (*row)[summary.column("trial")] << ',' << point << point_prefix(summary, *row) << ','
        << (*row)[summary.column("seed")] << ',' << (*row)[summary.column("final_cooperation")]
        << ',' << (*row)[summary.column("q_cooperate")] << ','
        << (*row)[summary.column("q_defect")] << ',' << (fails ? 1 : 0) << '\n';
    }
    if (total > 0) {
      report.notes.push_back("q-learning point " + std::to_string(point) + ": " +
                             std::to_string(failing) + "/" + std::to_string(total) +
                             " seeds keep cooperating (p(C) > 0.6)");
    }
  }
  if (!any) return;
  write_file(out / "report_qlearning.csv", o.str());
  report.written.push_back("report_qlearning.csv");
}

void drift_reports(const CsvTable& summary, const fs::path& run_dir, const fs::path& out,
                   std::size_t accuracy_window, ReportOutcome& report) {
  const CsvTable drift = read_csv(run_dir / "drift.csv");
  if (drift.rows.empty()) return;

  std::map<std::uint64_t, std::uint64_t> point_of;
  std::map<std::uint64_t, const std::vector<std::string>*> point_row;
  for (const auto& row : summary.rows) {
    const auto p = to_u64(row[summary.column("point")]);
    point_of[to_u64(row[summary.column("trial")])] = p;
    point_row.emplace(p, &row);
  }

  struct Acc {
    std::size_t n = 0;
    double accuracy = 0.0;
    double concept_sum = 0.0;
    double covariate = 0.0;
  };
  // (point, t) -> trial -> per-learner sums
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::map<std::uint64_t, Acc>> series;
  std::map<std::uint64_t, std::vector<DriftSnapshot>> curve_input;
  const std::size_t tc = drift.column("trial"), tt = drift.column("t"),
                    lc = drift.column("learner"), ac = drift.column("accuracy"),
                    cc = drift.column("concept_shift"), vc = drift.column("covariate_shift");
  for (const auto& row : drift.rows) {
    const auto trial = to_u64(row[tc]);
    auto it = point_of.find(trial);
    if (it == point_of.end()) continue;  // trial failed, no summary row
    DriftSnapshot s;
    s.trial = trial;
    s.t = to_u64(row[tt]);
    s.learner = static_cast<std::uint32_t>(to_u64(row[lc]));
    s.accuracy = to_double(row[ac]);
    s.concept_shift = to_double(row[cc]);
    s.covariate_shift = to_double(row[vc]);
    Acc& a = series[{it->second, s.t}][trial];
    a.n += 1;
    a.accuracy += s.accuracy;
    a.concept_sum += s.concept_shift;
    a.covariate += s.covariate_shift;
    // Early snapshots average over a partly filled accuracy window.
    if (s.t >= accuracy_window) curve_input[it->second].push_back(s);
  }

  std::ostringstream o;
  o << kPointHeader
    << ",t,trials,accuracy_mean,accuracy_stderr,concept_shift_mean,concept_shift_stderr,"
       "covariate_shift_mean,covariate_shift_stderr\n";
  for (const auto& [key, trials] : series) {
    std::vector<double> acc, con, cov;
    for (const auto& [trial, a] : trials) {
      const double n = static_cast<double>(a.n);
      acc.push_back(a.accuracy / n);
      con.push_back(a.concept_sum / n);
      cov.push_back(a.covariate / n);
    }
    const MeanErr ma = mean_stderr(acc), mc = mean_stderr(con), mv = mean_stderr(cov);
    o << key.first << point_prefix(summary, *point_row.at(key.first)) << ',' << key.second << ','
      << trials.size() << ',' << format_double(ma.mean) << ',' << format_double(ma.stderr_) << ','
      << format_double(mc.mean) << ',' << format_double(mc.stderr_) << ','
      << format_double(mv.mean) << ',' << format_double(mv.stderr_) << '\n';
  }
  write_file(out / "report_drift.csv", o.str());
  report.written.push_back("report_drift.csv");

  std::ostringstream c;
  c << kPointHeader
    << ",accuracy_lo,accuracy_hi,count,concept_shift_mean,covariate_shift_mean\n";
  for (const auto& [point, snaps] : curve_input) {
    for (const auto& b : shift_vs_accuracy_curve(snaps)) {
      c << point << point_prefix(summary, *point_row.at(point)) << ','
        << format_double(b.accuracy_lo) << ',' << format_double(b.accuracy_hi) << ','
        << b.count << ',' << format_double(b.mean_concept_shift) << ','
        << format_double(b.mean_covariate_shift) << '\n';
    }
  }
  write_file(out / "report_shift_vs_accuracy.csv", c.str());
  report.written.push_back("report_shift_vs_accuracy.csv");
}

void walkthrough_report(const fs::path& run_dir, const fs::path& out, ReportOutcome& report) {
  const CsvTable trace = read_csv(run_dir / "walkthrough.csv");
  std::map<std::uint64_t, std::pair<std::size_t, std::size_t>> per_t;  // defectors, copies
  for (const auto& row : trace.rows) {
    auto& [defectors, copies] = per_t[to_u64(row[trace.column("t")])];
    defectors += row[trace.column("action")] == "defect" ? 1 : 0;
    copies += row[trace.column("replaced_by")] != "-1" ? 1 : 0;
  }
  std::ostringstream o;
  o << "t,defectors,copies\n";
  for (const auto& [t, dc] : per_t) o << t << ',' << dc.first << ',' << dc.second << '\n';
  write_file(out / "report_walkthrough.csv", o.str());
  report.written.push_back("report_walkthrough.csv");
}

}  // namespace

ReportOutcome write_reports(const fs::path& run_dir, const fs::path& out_dir) {
  ReportOutcome report;
  if (!fs::exists(run_dir / "manifest.json")) {
    for (const char* f : {"manifest.json", "summary.csv", "steps.csv"}) {
      if (!fs::exists(run_dir / f)) report.missing.push_back(f);
    }
    return report;
  }
  json manifest;
  try {
    manifest = json::parse(read_file(run_dir / "manifest.json"));
  } catch (const json::exception& e) {
    throw Error("manifest.json: " + std::string(e.what()));
  }
  for (const auto& f : manifest.at("files")) {
    const auto name = f.get<std::string>();
    if (!fs::exists(run_dir / name)) report.missing.push_back(name);
  }
  if (!report.missing.empty()) return report;

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create '" + out_dir.string() + "': " + ec.message());

  if (manifest.at("scenario") == "pbt_walkthrough") {
    walkthrough_report(run_dir, out_dir, report);
    return report;
  }
  const CsvTable summary = read_csv(run_dir / "summary.csv");
  write_file(out_dir / "report_failure_grid.csv", failure_table(summary));
  report.written.push_back("report_failure_grid.csv");
  qlearning_panel(summary, out_dir, report);
  const std::size_t window =
      manifest.at("config").at("record").at("accuracy_window").get<std::size_t>();
  drift_reports(summary, run_dir, out_dir, window, report);
  const std::size_t failed = manifest.value("failed", std::size_t{0});
  if (failed > 0) report.notes.push_back(std::to_string(failed) + " trial(s) failed in this run");
  return report;
}

}  // namespace adslab
