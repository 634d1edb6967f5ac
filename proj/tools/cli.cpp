/*
   Copyright 2026 The SpikeForge Authors
   SPDX-License-Identifier: Apache-2.0

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>

#include "CLI11.hpp"
#include "spikeforge/annq.hpp"
#include "spikeforge/container.hpp"
#include "spikeforge/convert.hpp"
#include "spikeforge/ctt.hpp"
#include "spikeforge/ice.hpp"
#include "spikeforge/raster.hpp"
#include "spikeforge/report.hpp"
#include "spikeforge/spike_engine.hpp"

namespace spikeforge::cli {

namespace {

/// Failure carrying its exit code up to `run`.
struct CommandError : std::runtime_error {
  CommandError(ExitCode code, const std::string& what) : std::runtime_error(what), code(code) {}
  ExitCode code;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += num(values[i]);
  }
  return out;
}

NetworkSpec load_network(const std::string& path) { return read_network(path); }

void require_mode(const NetworkSpec& net, NetworkMode mode, const std::string& what) {
  if (net.mode != mode) {
    throw CommandError(kModeMismatch, what + " needs a " + std::string(to_string(mode)) +
                                          "-mode container, got " +
                                          std::string(to_string(net.mode)));
  }
}

// --- convert ---------------------------------------------------------------

struct ConvertArgs {
  std::string in, out;
  std::optional<int> tq, tmin, tmax;
};

int cmd_convert(const ConvertArgs& a, std::ostream& out) {
  NetworkSpec ann = load_network(a.in);
  require_mode(ann, NetworkMode::Ann, "convert");
  VRConfig cfg = ann.cfg;
  try {
    cfg = VRConfig(a.tq.value_or(cfg.t_q()), a.tmin.value_or(cfg.t_min()), a.tmax.value_or(cfg.t_max()));
  } catch (const ConfigError& e) {
    throw CommandError(kBadConfig, e.what());
  }
  ann.cfg = cfg;
  const NetworkSpec snn = convert_network(fold_network(ann));
  write_network(a.out, snn);

  out << "t_q=" << cfg.t_q() << '\n';
  out << "t_min=" << cfg.t_min() << '\n';
  out << "t_max=" << cfg.t_max() << '\n';
  out << "window=" << cfg.window() << '\n';
  out << "theta=" << num(layer_threshold(cfg)) << '\n';
  out << "weight_scale=" << num(layer_threshold(cfg)) << '\n';
  out << "input_offset=" << num(cfg.lower_rail()) << '\n';
  out << "layers=" << snn.layers.size() << '\n';
  return kOk;
}

// --- inspect ---------------------------------------------------------------

int cmd_inspect(const std::string& path, std::ostream& out) {
  const NetworkSpec net = load_network(path);
  out << "mode=" << to_string(net.mode) << '\n';
  out << "t_q=" << net.cfg.t_q() << '\n';
  out << "t_min=" << net.cfg.t_min() << '\n';
  out << "t_max=" << net.cfg.t_max() << '\n';
  out << "theta=" << num(net.cfg.theta()) << '\n';
  out << "layers=" << net.layers.size() << '\n';
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const LayerSpec& l = net.layers[i];
    const std::string key = "layer." + std::to_string(i) + ".";
    out << key << "kind=" << to_string(l.geometry.kind) << '\n';
    out << key << "in_channels=" << l.geometry.in_channels << '\n';
    out << key << "out_channels=" << l.geometry.out_channels << '\n';
    out << key << "kernel=" << l.geometry.kernel << '\n';
    out << key << "stride=" << l.geometry.stride << '\n';
    out << key << "padding=" << l.geometry.padding << '\n';
    if (l.geometry.kind == LayerKind::AvgPool) {
      out << key << "pool_scale=" << num(l.pool_scale) << '\n';
    } else {
      const auto w = l.weights.data();
      out << key << "weights.count=" << w.size() << '\n';
      out << key << "weights.sum=" << num(std::accumulate(w.begin(), w.end(), 0.0)) << '\n';
    }
    out << key << "bias=" << join(l.bias) << '\n';
    out << key << "batch_norm=" << (l.bn ? "yes" : "no") << '\n';
    if (l.thresholds) out << key << "thresholds=" << join(*l.thresholds) << '\n';
    if (l.step_constant) out << key << "step_constant=" << join(*l.step_constant) << '\n';
  }
  return kOk;
}

// --- run -------------------------------------------------------------------

struct RunArgs {
  std::string model, input, labels, engine = "snn-asg", dump;
  int ice_phi = 0;
  bool ice_varied = false;
  bool merged_division = false;
  double unit_cost = 1.0;
};

Tensor prepare_input(const Tensor& raw, const VRConfig& cfg, int ice_phi, bool varied) {
  if (ice_phi > 0) {
    IceConfig ice{ice_phi, cfg.window(), varied};
    try {
      return ice_to_vr_grid(ice_expand(raw, ice), ice.window, cfg);
    } catch (const std::domain_error& e) {
      throw CommandError(kBadContainer, e.what());
    }
  }
  if (!on_grid(raw, cfg)) {
    throw CommandError(kBadContainer,
                       "input values are not on the VR grid; quantize them or pass --ice-phi");
  }
  return raw;
}

int cmd_run(const RunArgs& a, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  NetworkSpec net = load_network(a.model);
  const bool ann_engine = a.engine == "ann";
  require_mode(net, ann_engine ? NetworkMode::Ann : NetworkMode::Snn, "engine " + a.engine);
  const Tensor input = prepare_input(read_tensor(a.input), net.cfg, a.ice_phi, a.ice_varied);

  RunReport report;
  report.engine = a.engine;
  if (!a.labels.empty()) report.labels = read_labels(a.labels);

  Tensor logits;
  if (ann_engine) {
    logits = ann_forward(fold_network(net), input, net.cfg);
  } else {
    const SpikeTrain encoded = encode_input(input, net.cfg);
    SimulationOptions options{!a.dump.empty(), a.merged_division};
    const SimulationResult result = a.engine == "snn-if"
                                        ? if_network_forward(net, encoded, options)
                                        : asg_network_forward(net, encoded, options);
    logits = result.logits;
    report.spikes = spike_report(result.stats, a.unit_cost);
    if (!a.dump.empty()) write_raster_file(a.dump, result.trains);
  }
  for (std::size_t i = 0; i < logits.shape().n; ++i) report.predictions.push_back(argmax_item(logits, i));
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  write_run_report(out, report);
  return kOk;
}

// --- train-thresholds ------------------------------------------------------

struct TrainArgs {
  std::string model, calib, out;
  double lr = 1e-3;
  int epochs = 50;
  std::optional<double> init_theta;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  NetworkSpec net = load_network(a.model);
  require_mode(net, NetworkMode::Snn, "train-thresholds");
  const Tensor calib = read_tensor(a.calib);
  if (calib.shape().n == 0) throw CommandError(kEmptyCalibration, "calibration set is empty");
  if (!on_grid(calib, net.cfg)) {
    throw CommandError(kBadContainer, "calibration values are not on the VR grid");
  }
  CttConfig cfg{a.lr, a.epochs, a.init_theta};
  const std::vector<Tensor> batches{calib};
  const CttResult result = ctt_train(net, batches, cfg);
  write_network(a.out, net);

  out << "calibration_items=" << calib.shape().n << '\n';
  out << "lr=" << num(a.lr) << '\n';
  out << "epochs=" << a.epochs << '\n';
  out << "initial_mean_abs_loss=" << num(result.initial_mean_abs_loss) << '\n';
  out << "final_mean_abs_loss=" << num(result.final_mean_abs_loss) << '\n';
  for (std::size_t i = 0; i < result.thresholds.size(); ++i) {
    const std::string key = "layer." + std::to_string(i) + ".";
    out << key << "epochs_run=" << result.epochs_run[i] << '\n';
    out << key << "thresholds=" << join(result.thresholds[i]) << '\n';
  }
  return kOk;
}

// --- ice -------------------------------------------------------------------

struct IceArgs {
  std::string input, out;
  int window = 1;
  int phi = 1;
  bool varied = false;
  std::optional<int> tq, tmin;
};

int cmd_ice(const IceArgs& a, std::ostream& out) {
  const Tensor raw = read_tensor(a.input);
  IceConfig ice{a.phi, a.window, a.varied};
  Tensor expanded;
  try {
    expanded = ice_expand(raw, ice);
  } catch (const std::domain_error& e) {
    throw CommandError(kBadContainer, e.what());
  }
  if (a.tq) {
    std::optional<VRConfig> vr;
    try {
      vr.emplace(*a.tq, a.tmin.value_or(0), a.tmin.value_or(0) + a.window);
    } catch (const ConfigError& e) {
      throw CommandError(kBadConfig, e.what());
    }
    expanded = ice_to_vr_grid(expanded, a.window, *vr);
  }
  write_tensor(a.out, expanded);
  out << "input_channels=" << raw.shape().c << '\n';
  out << "output_channels=" << expanded.shape().c << '\n';
  out << "phi=" << a.phi << '\n';
  out << "window=" << a.window << '\n';
  return kOk;
}

// --- report ----------------------------------------------------------------

int cmd_report(const std::string& path, double unit_cost, std::ostream& out) {
  std::vector<SpikeTrain> trains;
  try {
    trains = read_raster_file(path);
  } catch (const RasterFormatError& e) {
    throw CommandError(kBadContainer, e.what());
  } catch (const std::runtime_error& e) {
    throw CommandError(kBadContainer, e.what());
  }
  SpikeStats stats;
  for (std::size_t i = 0; i < trains.size(); ++i) {
    stats.layers.push_back({"record_" + std::to_string(i), trains[i].total(),
                            static_cast<std::uint64_t>(trains[i].window()) * trains[i].plane_size()});
  }
  out << "records=" << trains.size() << '\n';
  write_spike_report(out, spike_report(stats, unit_cost), "");
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"spikeforge: ANN-to-SNN conversion and spiking inference"};
  app.require_subcommand(1);

  ConvertArgs convert_args;
  auto* convert = app.add_subcommand("convert", "Fold batch norm and convert an ANN container to an SNN container");
  convert->add_option("--in", convert_args.in, "ANN container manifest")->required();
  convert->add_option("--out", convert_args.out, "SNN container manifest to write")->required();
  convert->add_option("--tq", convert_args.tq, "Quantization level T_q");
  convert->add_option("--tmin", convert_args.tmin, "Lower level T_min");
  convert->add_option("--tmax", convert_args.tmax, "Upper level T_max");

  std::string inspect_model;
  auto* inspect = app.add_subcommand("inspect", "Print a container summary");
  inspect->add_option("model", inspect_model, "Container manifest")->required();

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run inference and print a report");
  run_cmd->add_option("--model", run_args.model, "Container manifest")->required();
  run_cmd->add_option("--input", run_args.input, "Input tensor manifest")->required();
  run_cmd->add_option("--labels", run_args.labels, "Optional label CSV");
  run_cmd->add_option("--engine", run_args.engine, "ann | snn-if | snn-asg")
      ->check(CLI::IsMember({"ann", "snn-if", "snn-asg"}));
  run_cmd->add_option("--ice-phi", run_args.ice_phi, "Input channel expansion factor (0 = off)")
      ->check(CLI::Range(0, 64));
  run_cmd->add_flag("--ice-varied-levels", run_args.ice_varied, "Use levels T+c / T-c per ICE iteration");
  run_cmd->add_option("--dump-spikes", run_args.dump, "Write SPK1 rasters of every spiking layer");
  run_cmd->add_option("--unit-cost", run_args.unit_cost, "Energy cost per fired spike");
  run_cmd->add_flag("--merged-division", run_args.merged_division,
                    "Fold the ASG 1/T averaging into the weights");

  TrainArgs train_args;
  auto* train = app.add_subcommand("train-thresholds", "Channel-wise IF threshold training");
  train->add_option("--model", train_args.model, "SNN container manifest")->required();
  train->add_option("--calib", train_args.calib, "Calibration tensor manifest")->required();
  train->add_option("--out", train_args.out, "Container manifest to write")->required();
  train->add_option("--lr", train_args.lr, "Learning rate per spatial site")
      ->check(CLI::PositiveNumber);
  train->add_option("--epochs", train_args.epochs, "Epochs per layer (>= 1)")
      ->check(CLI::Range(1, 1000000));
  train->add_option("--init-theta", train_args.init_theta, "Starting threshold for every channel")
      ->check(CLI::PositiveNumber);

  IceArgs ice_args;
  auto* ice = app.add_subcommand("ice", "Input channel expansion of a tensor in [0, 1]");
  ice->add_option("--input", ice_args.input, "Input tensor manifest")->required();
  ice->add_option("--out", ice_args.out, "Output tensor manifest")->required();
  ice->add_option("--window", ice_args.window, "Base level T")->required()->check(CLI::PositiveNumber);
  ice->add_option("--ice-phi", ice_args.phi, "Expansion factor")->check(CLI::Range(1, 64));
  ice->add_flag("--ice-varied-levels", ice_args.varied, "Use levels T+c / T-c per iteration");
  ice->add_option("--tq", ice_args.tq, "Map output onto the VR grid of this T_q");
  ice->add_option("--tmin", ice_args.tmin, "T_min of that VR grid");

  std::string raster_path;
  double report_cost = 1.0;
  auto* report = app.add_subcommand("report", "Spike statistics of an SPK1 raster dump");
  report->add_option("raster", raster_path, "Raster file")->required();
  report->add_option("--unit-cost", report_cost, "Energy cost per fired spike");

  std::vector<std::string> argv_store{"spikeforge"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*convert) return cmd_convert(convert_args, out);
    if (*inspect) return cmd_inspect(inspect_model, out);
    if (*run_cmd) return cmd_run(run_args, out);
    if (*train) return cmd_train(train_args, out);
    if (*ice) return cmd_ice(ice_args, out);
    if (*report) return cmd_report(raster_path, report_cost, out);
  } catch (const CommandError& e) {
    err << "error: " << e.what() << '\n';
    return e.code;
  } catch (const ContainerError& e) {
    err << "error: " << e.what() << '\n';
    return kBadContainer;
  } catch (const RasterFormatError& e) {
    err << "error: " << e.what() << '\n';
    return kBadContainer;
  } catch (const EmptyCalibrationError& e) {
    err << "error: " << e.what() << '\n';
    return kEmptyCalibration;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kBadConfig;
  } catch (const GridError& e) {
    err << "error: " << e.what() << '\n';
    return kBadContainer;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace spikeforge::cli
