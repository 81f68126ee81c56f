// Python bindings. Configs cross the boundary as JSON text; the Python
// package wraps dicts around that.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "adslab/experiment.hpp"
#include "adslab/metrics.hpp"
#include "adslab/output.hpp"
#include "adslab/scheduler.hpp"

namespace py = pybind11;
using namespace adslab;

namespace {

RlAction parse_action(const std::string& s) {
  if (s == "C" || s == "cooperate") return RlAction::kCooperate;
  if (s == "D" || s == "defect") return RlAction::kDefect;
  throw Error("action must be 'C' or 'D', got '" + s + "'");
}

Matrix to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw Error("expected a 2-d array");
  Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), m.data().begin());
  return m;
}

py::array_t<double> steps_array(const std::vector<StepRecord>& rows) {
  py::array_t<double> out({static_cast<py::ssize_t>(rows.size()), py::ssize_t{7}});
  auto v = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < static_cast<py::ssize_t>(rows.size()); ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    v(i, 0) = static_cast<double>(r.trial);
    v(i, 1) = static_cast<double>(r.t);
    v(i, 2) = r.learner;
    v(i, 3) = r.env;
    v(i, 4) = static_cast<double>(r.action);
    v(i, 5) = r.reward;
    v(i, 6) = r.extra;
  }
  return out;
}

py::array_t<double> drift_array(const std::vector<DriftSnapshot>& rows) {
  py::array_t<double> out({static_cast<py::ssize_t>(rows.size()), py::ssize_t{6}});
  auto v = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < static_cast<py::ssize_t>(rows.size()); ++i) {
    const auto& d = rows[static_cast<std::size_t>(i)];
    v(i, 0) = static_cast<double>(d.trial);
    v(i, 1) = static_cast<double>(d.t);
    v(i, 2) = d.learner;
    v(i, 3) = d.accuracy;
    v(i, 4) = d.concept_shift;
    v(i, 5) = d.covariate_shift;
  }
  return out;
}

py::dict summary_dict(const TrialSummary& s) {
  py::dict d;
  d["trial"] = s.trial_id;
  d["replicate"] = s.replicate;
  d["final_cooperation"] = s.final_cooperation;
  d["learner_cooperation"] = s.learner_cooperation;
  d["q_cooperate"] = s.q_cooperate;
  d["q_defect"] = s.q_defect;
  d["mean_theta"] = s.mean_theta;
  d["mean_lr"] = s.mean_lr;
  d["final_y1"] = s.final_y1;
  d["final_y2"] = s.final_y2;
  d["learner_y1"] = s.learner_y1;
  d["learner_y2"] = s.learner_y2;
  d["accuracy_auc"] = s.accuracy_auc;
  d["final_accuracy"] = s.final_accuracy;
  d["final_concept_shift"] = s.final_concept_shift;
  d["final_covariate_shift"] = s.final_covariate_shift;
  d["final_max_user_prob"] = s.final_max_user_prob;
  d["saturation_step"] = s.saturation_step;
  return d;
}

py::dict trial_dict(const TrialResult& r) {
  py::dict d;
  d["summary"] = summary_dict(r.summary);
  d["steps"] = steps_array(r.steps);
  d["drift"] = drift_array(r.drift);
  py::array_t<double> coop({static_cast<py::ssize_t>(r.cooperation_series.size()), py::ssize_t{2}});
  auto v = coop.mutable_unchecked<2>();
  for (std::size_t i = 0; i < r.cooperation_series.size(); ++i) {
    v(static_cast<py::ssize_t>(i), 0) = static_cast<double>(r.cooperation_series[i].first);
    v(static_cast<py::ssize_t>(i), 1) = r.cooperation_series[i].second;
  }
  d["cooperation"] = coop;
  return d;
}

const TrialConfig& pick_trial(const std::vector<TrialConfig>& trials, std::size_t index) {
  if (index >= trials.size()) {
    throw py::index_error("trial " + std::to_string(index) + " out of range (" +
                          std::to_string(trials.size()) + " trials)");
  }
  return trials[index];
}

}  // namespace

PYBIND11_MODULE(_adslab, m) {
  m.doc() = "Population training and distributional-shift simulations";

  // Translators run newest first, so the subclass goes last.
  auto base = py::register_exception<Error>(m, "AdslabError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  m.def("softmax", [](std::vector<double> v) { return softmax(v); });
  m.def("sigmoid", &sigmoid);
  m.def("kl_divergence",
        [](std::vector<double> p, std::vector<double> q) { return kl_divergence(p, q); });
  m.def("cosine_distance",
        [](std::vector<double> u, std::vector<double> v) { return cosine_distance(u, v); });
  m.def("concept_shift",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> w_init,
           py::array_t<double, py::array::c_style | py::array::forcecast> w_now) {
          return concept_shift(to_matrix(w_init), to_matrix(w_now));
        });
  m.def(
      "covariate_shift",
      [](std::vector<double> g_init, std::vector<double> g_now, bool current_vs_initial) {
        return covariate_shift(g_init, g_now,
                               current_vs_initial ? KlDirection::kCurrentVsInitial
                                                  : KlDirection::kInitialVsCurrent);
      },
      py::arg("g_init"), py::arg("g_now"), py::arg("current_vs_initial") = true);

  m.def("rl_reward", [](const std::string& state, const std::string& action, double beta) {
    return rl_reward(parse_action(state), parse_action(action), beta);
  });
  m.def(
      "swap_assignment",
      [](std::size_t i, std::uint64_t t, std::size_t n, bool enabled) {
        return swap_assignment(i, t, SwapSchedule{enabled, n});
      },
      py::arg("i"), py::arg("t"), py::arg("n"), py::arg("enabled") = true);
  m.def("exploit_count", &exploit_count, py::arg("n"), py::arg("fraction") = 0.2);

  m.def("preset_names", &preset_names);
  m.def("canonical_config", [](const std::string& text) {
    auto cfg = parse_config(text);
    cfg.validate();
    return canonical_json(cfg);
  });
  m.def("config_hash", [](const std::string& text) { return config_hash(parse_config(text)); });
  m.def("trial_count", [](const std::string& text) {
    auto cfg = parse_config(text);
    cfg.validate();
    return expand_trials(cfg).size();
  });

  m.def(
      "run_trial",
      [](const std::string& text, std::size_t index) {
        auto cfg = parse_config(text);
        cfg.validate();
        const auto trials = expand_trials(cfg);
        const TrialConfig tc = pick_trial(trials, index);
        TrialResult r;
        {
          py::gil_scoped_release release;
          r = run_trial(tc);
        }
        return trial_dict(r);
      },
      py::arg("config"), py::arg("index") = 0);

  m.def(
      "run_experiment",
      [](const std::string& text, const std::filesystem::path& out_dir, std::size_t workers) {
        auto cfg = parse_config(text);
        cfg.validate();
        RunOutcome o;
        {
          py::gil_scoped_release release;
          o = run_experiment(cfg, RunOptions{out_dir, workers});
        }
        py::dict d;
        d["trials"] = o.trials;
        d["failed"] = o.failed;
        d["config_hash"] = o.config_hash;
        d["files"] = o.files;
        return d;
      },
      py::arg("config"), py::arg("out_dir"), py::arg("workers") = 1);

  m.def(
      "write_reports",
      [](const std::filesystem::path& run_dir, const std::filesystem::path& out_dir) {
        const auto r = write_reports(run_dir, out_dir);
        py::dict d;
        d["missing"] = r.missing;
        d["written"] = r.written;
        d["notes"] = r.notes;
        return d;
      },
      py::arg("run_dir"), py::arg("out_dir"));

  m.def(
      "pbt_walkthrough",
      [](std::uint64_t seed, std::size_t intervals) {
        const auto w = run_pbt_walkthrough(seed, intervals);
        py::list out;
        for (const auto& iv : w.intervals) {
          py::dict d;
          std::string actions;
          for (auto a : iv.actions) actions += a == RlAction::kCooperate ? 'C' : 'D';
          d["t"] = iv.t;
          d["actions"] = actions;
          d["rewards"] = iv.rewards;
          d["copies"] = iv.copies;
          out.append(d);
        }
        return out;
      },
      py::arg("seed") = 0, py::arg("intervals") = 10);
}
