#include "omm/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "omm/config.hpp"
#include "omm/error.hpp"
#include "omm/presets.hpp"
#include "omm/sweep.hpp"

namespace omm::cli {

namespace {

namespace fs = std::filesystem;

struct Flags {
  std::string config;
  std::string out;
  std::string format = "json";
  std::string mode;
  std::string steering_form = "det";
  std::string figure;
  int grid = 0;
  int threads = 0;
};

ProgressCallback progress_printer(std::ostream& err, std::string label) {
  return [&err, label = std::move(label), last = std::size_t{0}](std::size_t done, std::size_t total) mutable {
    const std::size_t step = std::max<std::size_t>(total / 20, 1);
    if (done == total || done >= last + step) {
      last = done;
      err << label << ": " << done << "/" << total << " points\n";
    }
  };
}

SteeringForm steering_form_flag(const Flags& flags) {
  const auto form = parse_steering_form(flags.steering_form);
  if (!form) throw ConfigError("--steering-form must be det or symplectic");
  return *form;
}

int threads_flag(const Flags& flags) { return flags.threads > 0 ? flags.threads : default_threads(); }

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write '" + path.string() + "'");
  file << content;
  file.flush();
  if (!file) throw Error("failed writing '" + path.string() + "'");
}

int cmd_point(const Flags& flags, std::ostream& out) {
  std::optional<ParamMode> mode;
  if (!flags.mode.empty()) {
    mode = parse_param_mode(flags.mode);
    if (!mode) throw ConfigError("--mode must be effective or microscopic");
  }
  if (flags.format != "json" && flags.format != "csv") {
    throw ConfigError("--format must be json or csv");
  }
  const PointParams parsed = parse_point_config(load_json(flags.config), mode);

  MeasureOptions options;
  options.steering_form = steering_form_flag(flags);

  EffectiveParams params;
  nlohmann::json steady;
  if (const auto* micro = std::get_if<MicroscopicParams>(&parsed)) {
    const SteadyState ss = steady_state(*micro);
    params = effective_from_micro(*micro);
    steady = {{"c1s", {ss.c1.real(), ss.c1.imag()}},
              {"c2s", {ss.c2.real(), ss.c2.imag()}},
              {"m_s", {ss.m.real(), ss.m.imag()}},
              {"q_s", ss.q},
              {"iterations", ss.iterations}};
  } else {
    params = std::get<EffectiveParams>(parsed);
  }

  const SweepRow row = evaluate_point(params, options);
  if (flags.format == "json") {
    nlohmann::json doc = to_json(row);
    doc["steering_form"] = steering_form_label(options.steering_form);
    if (!steady.is_null()) doc["steady_state"] = steady;
    out << doc.dump(2) << '\n';
  } else {
    SweepResult single;
    single.spec.base = params;
    single.spec.options = options;
    single.rows.push_back(row);
    write_csv(out, single);
  }
  if (row.status.rfind("error", 0) == 0) return kExitError;
  return row.report.stable() ? kExitOk : kExitUnstable;
}

SweepSpec load_spec(const Flags& flags) {
  SweepSpec spec = parse_sweep_spec(load_json(flags.config));
  if (flags.grid > 0) override_grid(spec, flags.grid);
  if (!flags.out.empty()) spec.output = flags.out;
  validate(spec);
  return spec;
}

void emit(const SweepSpec& spec, const std::string& content, std::ostream& out) {
  if (spec.output.empty()) {
    out << content;
  } else {
    write_file(spec.output, content);
  }
}

int cmd_sweep(Flags flags, std::ostream& out, std::ostream& err) {
  SweepSpec spec = load_spec(flags);
  if (flags.steering_form != "det") spec.options.steering_form = steering_form_flag(flags);
  if (!spec.output.empty()) {
    // fail on an unwritable path before spending time on the grid
    std::ofstream probe(spec.output, std::ios::app);
    if (!probe) throw Error("cannot write '" + spec.output + "'");
  }
  const SweepResult result = run_sweep(spec, threads_flag(flags), progress_printer(err, "sweep"));
  std::ostringstream csv;
  write_csv(csv, result);
  emit(spec, csv.str(), out);
  return kExitOk;
}

int cmd_stability(const Flags& flags, std::ostream& out, std::ostream& err) {
  const SweepSpec spec = load_spec(flags);
  if (!spec.output.empty()) {
    std::ofstream probe(spec.output, std::ios::app);
    if (!probe) throw Error("cannot write '" + spec.output + "'");
  }
  const SweepResult result =
      run_sweep(spec, threads_flag(flags), progress_printer(err, "stability"), SweepKind::stability_only);
  std::ostringstream csv;
  write_stability_csv(csv, result);
  emit(spec, csv.str(), out);
  return kExitOk;
}

std::string describe_point(const SweepResult& result, const SweepRow& row) {
  std::ostringstream s;
  for (std::size_t k = 0; k < row.axis_values.size(); ++k) {
    if (k) s << ", ";
    s << result.spec.axes[k].field << "=" << format_number(row.axis_values[k]);
  }
  return s.str();
}

void summarize_panel(const SweepResult& result, const std::vector<std::string>& measures, std::ostream& out) {
  std::size_t unstable = 0;
  for (const SweepRow& row : result.rows) unstable += row.report.stable() ? 0 : 1;
  out << "  " << result.rows.size() << " points, " << unstable << " unstable\n";

  for (const std::string& name : measures) {
    const SweepRow* best = nullptr;
    double best_value = -1.0;
    for (const SweepRow& row : result.rows) {
      if (!row.report.stable()) continue;
      const double v = row.report.at(name);
      if (v > best_value) {
        best_value = v;
        best = &row;
      }
    }
    if (best) {
      out << "  max " << name << " = " << format_number(best_value) << " at " << describe_point(result, *best) << '\n';
    }
  }
  if (measures.size() > 1) {
    std::map<std::string, std::size_t> regions;
    for (const SweepRow& row : result.rows) {
      if (!row.report.stable()) continue;
      std::string label;
      for (const std::string& name : measures) {
        if (row.report.at(name) > kPositivityThreshold) label += (label.empty() ? "" : "&") + name;
      }
      ++regions[label.empty() ? "none" : label];
    }
    for (const auto& [label, count] : regions) out << "  region " << label << ": " << count << " points\n";
  }
}

int cmd_reproduce(const Flags& flags, std::ostream& out, std::ostream& err) {
  const Figure& figure = find_figure(flags.figure);
  const fs::path dir = flags.out.empty() ? fs::path(".") : fs::path(flags.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory '" + dir.string() + "'");

  MeasureOptions options;
  options.steering_form = steering_form_flag(flags);

  std::vector<SweepResult> cache;
  for (const Panel& panel : figure.panels) {
    SweepSpec spec = preset(panel.preset);
    if (flags.grid > 0) override_grid(spec, flags.grid);
    spec.options = options;

    const SweepResult* result = nullptr;
    for (const SweepResult& r : cache) {
      if (same_grid(r.spec, spec)) result = &r;
    }
    if (!result) {
      cache.push_back(run_sweep(spec, threads_flag(flags), progress_printer(err, panel.preset)));
      result = &cache.back();
    }

    SweepResult view = *result;
    view.spec.measures = panel.measures;
    std::ostringstream csv;
    write_csv(csv, view);
    const fs::path path = dir / (figure.id + "_" + panel.letter + ".csv");
    write_file(path, csv.str());
    out << path.string() << '\n';
    summarize_panel(view, panel.measures, out);
  }
  return kExitOk;
}

}  // namespace

int default_threads() {
  if (const char* env = std::getenv("OMM_QCORR_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steady-state quantum correlations of a five-mode optomagnomechanical system", "omm-qcorr"};
  app.require_subcommand(1, 1);
  Flags flags;

  const std::string steering_help = "Multimode steered-party steering: det (determinant) or symplectic";
  const std::string threads_help = "Worker threads (default: OMM_QCORR_THREADS or hardware concurrency)";

  auto* point = app.add_subcommand("point", "Evaluate every measure at one parameter point");
  point->add_option("--config", flags.config, "Parameter file (JSON)")->required();
  point->add_option("--format", flags.format, "Output format: json or csv")->capture_default_str();
  point->add_option("--mode", flags.mode, "Parameterization: effective or microscopic (overrides the file)");
  point->add_option("--steering-form", flags.steering_form, steering_help)->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Run a 1D/2D parameter sweep and write a CSV table");
  sweep->add_option("--config", flags.config, "Sweep spec file (JSON)")->required();
  sweep->add_option("--out", flags.out, "Output CSV path (default: spec 'out', else stdout)");
  sweep->add_option("--grid", flags.grid, "Points per axis (overrides the spec)");
  sweep->add_option("--threads", flags.threads, threads_help);
  sweep->add_option("--steering-form", flags.steering_form, steering_help)->capture_default_str();

  auto* reproduce = app.add_subcommand("reproduce", "Write one CSV per panel of a figure preset");
  reproduce->add_option("figure", flags.figure, "Figure id: fig2 .. fig8")->required();
  reproduce->add_option("--out", flags.out, "Output directory (default: current directory)");
  reproduce->add_option("--grid", flags.grid, "Points per axis (overrides the preset)");
  reproduce->add_option("--threads", flags.threads, threads_help);
  reproduce->add_option("--steering-form", flags.steering_form, steering_help)->capture_default_str();

  auto* stab = app.add_subcommand("stability", "Write the max real part of the drift spectrum over a grid");
  stab->add_option("--config", flags.config, "Sweep spec file (JSON)")->required();
  stab->add_option("--out", flags.out, "Output CSV path (default: spec 'out', else stdout)");
  stab->add_option("--grid", flags.grid, "Points per axis (overrides the spec)");
  stab->add_option("--threads", flags.threads, threads_help);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "omm-qcorr: " << e.what() << '\n';
    if (const auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << sub->help();
    } else {
      err << app.help();
    }
    return kExitError;
  }

  try {
    if (point->parsed()) return cmd_point(flags, out);
    if (sweep->parsed()) return cmd_sweep(flags, out, err);
    if (reproduce->parsed()) return cmd_reproduce(flags, out, err);
    if (stab->parsed()) return cmd_stability(flags, out, err);
  } catch (const std::exception& e) {
    err << "omm-qcorr: error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace omm::cli
