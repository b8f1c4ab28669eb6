// Copyright 2026 The GESI Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gesi/audio.hpp"
#include "gesi/batch.hpp"
#include "gesi/errors.hpp"
#include "gesi/hl_simulator.hpp"
#include "gesi/metric.hpp"
#include "gesi/report.hpp"
#include "gesi/stimulus.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string config_path;
  gesi::PredictionParams params;
  double snr_db = 0.0;
  uint64_t seed = 0;
  std::string out;
};

void apply_config_file(gesi::PredictionParams& p, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gesi::DataError("cannot open config: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw gesi::DataError(std::string("config parse error: ") + e.what());
  }
  if (doc.contains("rho")) p.rho = doc["rho"];
  if (doc.contains("eta")) p.eta = doc["eta"];
  if (doc.contains("h_max")) p.h_max = doc["h_max"];
  if (doc.contains("i_max")) p.sigmoid.i_max = doc["i_max"];
  if (doc.contains("a")) p.sigmoid.a = doc["a"];
  if (doc.contains("b")) p.sigmoid.b = doc["b"];
  if (doc.contains("t_ma_ms")) p.t_ma_ms = doc["t_ma_ms"];
  if (doc.contains("mode")) p.mode = gesi::normalization_mode_from_string(doc["mode"]);
  if (doc.contains("n_channels")) p.frontend.n_channels = doc["n_channels"];
  if (doc.contains("f_lo_hz")) p.frontend.f_lo_hz = doc["f_lo_hz"];
  if (doc.contains("f_hi_hz")) p.frontend.f_hi_hz = doc["f_hi_hz"];
  if (doc.contains("frame_shift_ms")) p.frontend.frame_shift_ms = doc["frame_shift_ms"];
  if (doc.contains("calibration_db_spl")) p.frontend.calibration_db_spl = doc["calibration_db_spl"];
  if (doc.contains("tmtf_gains")) p.tmtf_gains_enabled = doc["tmtf_gains"];
}

std::string config_echo(const gesi::PredictionParams& p, uint64_t seed) {
  json doc;
  doc["rho"] = p.rho;
  doc["eta"] = p.eta;
  doc["h_max"] = p.h_max;
  doc["i_max"] = p.sigmoid.i_max;
  doc["a"] = p.sigmoid.a;
  doc["b"] = p.sigmoid.b;
  doc["t_ma_ms"] = p.t_ma_ms;
  doc["mode"] = gesi::to_string(p.mode);
  doc["n_channels"] = p.frontend.n_channels;
  doc["f_lo_hz"] = p.frontend.f_lo_hz;
  doc["f_hi_hz"] = p.frontend.f_hi_hz;
  doc["frame_shift_ms"] = p.frontend.frame_shift_ms;
  doc["calibration_db_spl"] = p.frontend.calibration_db_spl;
  doc["tmtf_gains"] = p.tmtf_gains_enabled;
  doc["seed"] = seed;
  return doc.dump();
}

gesi::ListenerProfile resolve_profile(const std::string& spec, double alpha_override,
                                      bool alpha_given) {
  gesi::ListenerProfile profile = (spec.empty() || spec == "NH")
                                      ? gesi::ListenerProfile::normal_hearing()
                                      : gesi::load_profile(spec);
  if (alpha_given) {
    profile.alpha = alpha_override;
    profile.validate();
  }
  return profile;
}

void write_output(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
  } else {
    gesi::write_text_file(out, content);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gesi::DataError("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void add_metric_flags(CLI::App* cmd, Options& o, std::vector<double>& sigmoid_ab,
                      std::string& mode_name) {
  cmd->add_option("--config", o.config_path, "JSON configuration file");
  cmd->add_option("--rho", o.params.rho, "similarity asymmetry weight");
  cmd->add_option("--eta", o.params.eta, "efficiency exponent");
  cmd->add_option("--hmax", o.params.h_max, "SSI weight boundary constant");
  cmd->add_option("--imax", o.params.sigmoid.i_max, "intelligibility ceiling (%)");
  cmd->add_option("--sigmoid", sigmoid_ab, "sigmoid parameters a,b")->expected(2);
  cmd->add_option("--tma-ms", o.params.t_ma_ms, "max channel alignment correction (ms)");
  cmd->add_option("--mode", mode_name, "d normalization: literal|channel_sum");
  cmd->add_option("--channels", o.params.frontend.n_channels, "filterbank channels");
  cmd->add_flag_callback("--no-tmtf-gains",
                         [&o]() { o.params.tmtf_gains_enabled = false; },
                         "disable TMTF peak gains in the MFB");
}

void finalize_metric_flags(CLI::App* cmd, Options& o,
                           const std::vector<double>& sigmoid_ab,
                           const std::string& mode_name) {
  // Config file first, then explicit flags take precedence.
  if (!o.config_path.empty()) {
    gesi::PredictionParams from_file = o.params;
    apply_config_file(from_file, o.config_path);
    if (!cmd->count("--rho")) o.params.rho = from_file.rho;
    if (!cmd->count("--eta")) o.params.eta = from_file.eta;
    if (!cmd->count("--hmax")) o.params.h_max = from_file.h_max;
    if (!cmd->count("--imax")) o.params.sigmoid.i_max = from_file.sigmoid.i_max;
    if (!cmd->count("--sigmoid")) {
      o.params.sigmoid.a = from_file.sigmoid.a;
      o.params.sigmoid.b = from_file.sigmoid.b;
    }
    if (!cmd->count("--tma-ms")) o.params.t_ma_ms = from_file.t_ma_ms;
    if (!cmd->count("--mode")) o.params.mode = from_file.mode;
    if (!cmd->count("--channels")) o.params.frontend = from_file.frontend;
    o.params.tmtf_gains_enabled = from_file.tmtf_gains_enabled;
  }
  if (cmd->count("--sigmoid")) {
    o.params.sigmoid.a = sigmoid_ab[0];
    o.params.sigmoid.b = sigmoid_ab[1];
  }
  if (cmd->count("--mode")) {
    o.params.mode = gesi::normalization_mode_from_string(mode_name);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GESI speech intelligibility toolkit"};
  app.require_subcommand(1);

  Options o;
  std::vector<double> sigmoid_ab;
  std::string mode_name;

  // predict
  std::string ref_path, test_path, profile_path;
  double alpha = 0.5;
  auto* predict_cmd = app.add_subcommand("predict", "predict SI for one ref/test pair");
  predict_cmd->add_option("--ref", ref_path, "reference WAV")->required();
  predict_cmd->add_option("--test", test_path, "test WAV")->required();
  predict_cmd->add_option("--profile", profile_path, "listener profile JSON (or NH)");
  predict_cmd->add_option("--alpha", alpha, "compression health override");
  predict_cmd->add_option("--out", o.out, "output CSV path (default stdout)");
  add_metric_flags(predict_cmd, o, sigmoid_ab, mode_name);

  // batch
  std::string manifest_path, profiles_dir;
  int workers = 4;
  auto* batch_cmd = app.add_subcommand("batch", "batch predict from a manifest");
  batch_cmd->add_option("--manifest", manifest_path, "manifest CSV")->required();
  batch_cmd->add_option("--profiles", profiles_dir, "directory of listener profile JSONs");
  batch_cmd->add_option("--workers", workers, "worker pool size");
  batch_cmd->add_option("--seed", o.seed, "random seed");
  batch_cmd->add_option("--out", o.out, "output CSV path (default stdout)");
  add_metric_flags(batch_cmd, o, sigmoid_ab, mode_name);

  // fit
  std::string table_path;
  auto* fit_cmd = app.add_subcommand("fit", "fit sigmoid (a, b) from a prediction table");
  fit_cmd->add_option("--table", table_path, "prediction table CSV")->required();
  fit_cmd->add_option("--imax", o.params.sigmoid.i_max, "intelligibility ceiling (%)");
  fit_cmd->add_option("--out", o.out, "output JSON path (default stdout)");

  // simulate
  std::string in_path, gains_out;
  auto* sim_cmd = app.add_subcommand("simulate", "synthesize simulated hearing-loss audio");
  sim_cmd->add_option("--in", in_path, "input WAV")->required();
  sim_cmd->add_option("--profile", profile_path, "listener profile JSON")->required();
  sim_cmd->add_option("--alpha", alpha, "compression health override");
  sim_cmd->add_option("--out", o.out, "output WAV")->required();
  sim_cmd->add_option("--gains-out", gains_out, "dump gain trajectory matrix CSV");
  sim_cmd->add_option("--channels", o.params.frontend.n_channels, "filterbank channels");

  // mix
  std::string speech_path, noise_path;
  auto* mix_cmd = app.add_subcommand("mix", "mix speech and noise at a target SNR");
  mix_cmd->add_option("--speech", speech_path, "speech WAV")->required();
  mix_cmd->add_option("--noise", noise_path, "noise WAV (white noise when omitted)");
  mix_cmd->add_option("--snr", o.snr_db, "target SNR (dB)")->required();
  mix_cmd->add_option("--seed", o.seed, "seed for generated noise");
  mix_cmd->add_option("--out", o.out, "output WAV")->required();

  // irm
  std::string clean_path;
  gesi::StftConfig stft;
  double irm_exponent = 0.5;
  auto* irm_cmd = app.add_subcommand("irm", "oracle ideal-ratio-mask enhancement");
  irm_cmd->add_option("--clean", clean_path, "clean speech WAV")->required();
  irm_cmd->add_option("--noise", noise_path, "noise WAV")->required();
  irm_cmd->add_option("--window-ms", stft.window_ms, "STFT window (ms)");
  irm_cmd->add_option("--hop-ms", stft.hop_ms, "STFT hop (ms)");
  irm_cmd->add_option("--exponent", irm_exponent, "mask exponent");
  irm_cmd->add_option("--out", o.out, "output WAV")->required();

  // reverb
  std::string rir_path;
  auto* reverb_cmd = app.add_subcommand("reverb", "convolve with a room impulse response");
  reverb_cmd->add_option("--in", in_path, "input WAV")->required();
  reverb_cmd->add_option("--rir", rir_path, "room impulse response WAV")->required();
  reverb_cmd->add_option("--out", o.out, "output WAV")->required();

  // report
  std::string out_dir, train_listeners;
  int subsample_k = 0, repeats = 10;
  auto* report_cmd = app.add_subcommand("report", "evaluation report from a prediction table");
  report_cmd->add_option("--table", table_path, "prediction table CSV")->required();
  report_cmd->add_option("--imax", o.params.sigmoid.i_max, "intelligibility ceiling (%)");
  report_cmd->add_option("--train-listeners", train_listeners,
                         "comma-separated listener ids for the sigmoid fit (default: all)");
  report_cmd->add_option("--subsample", subsample_k,
                         "k-of-N listener subsampling (0 = off)");
  report_cmd->add_option("--repeats", repeats, "subsampling repeats");
  report_cmd->add_option("--seed", o.seed, "subsampling seed");
  report_cmd->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  try {
    if (*predict_cmd) {
      finalize_metric_flags(predict_cmd, o, sigmoid_ab, mode_name);
      const auto profile =
          resolve_profile(profile_path, alpha, predict_cmd->count("--alpha") > 0);
      const auto ref = gesi::read_wav(ref_path);
      const auto test = gesi::read_wav(test_path);
      auto rec = gesi::predict(ref, test, profile, o.params);
      rec.reference_id = ref_path;
      rec.test_id = test_path;
      gesi::PredictionRow row;
      row.record = {ref_path, test_path, "", 0.0, profile.name, std::nullopt};
      row.prediction = rec;
      row.ok = true;
      write_output(o.out, "# config: " + config_echo(o.params, o.seed) + "\n" +
                              gesi::prediction_table_csv({row}));
    } else if (*batch_cmd) {
      finalize_metric_flags(batch_cmd, o, sigmoid_ab, mode_name);
      const auto manifest = gesi::load_manifest(manifest_path);
      std::map<std::string, gesi::ListenerProfile> profiles;
      if (!profiles_dir.empty()) {
        for (const auto& entry : fs::directory_iterator(profiles_dir)) {
          if (entry.path().extension() == ".json") {
            profiles[entry.path().stem().string()] =
                gesi::load_profile(entry.path().string());
          }
        }
      }
      gesi::BatchParams bp;
      bp.prediction = o.params;
      bp.workers = workers;
      bp.seed = o.seed;
      const auto rows = gesi::batch_predict(manifest, profiles, bp);
      write_output(o.out, "# config: " + config_echo(o.params, o.seed) + "\n" +
                              gesi::prediction_table_csv(rows));
    } else if (*fit_cmd) {
      const auto rows = gesi::parse_prediction_table_csv(read_text_file(table_path));
      std::vector<std::pair<double, double>> pairs;
      for (const auto& row : rows) {
        if (row.ok && row.record.subjective_si_percent) {
          pairs.emplace_back(row.prediction.d, *row.record.subjective_si_percent);
        }
      }
      const auto fitted = gesi::fit_sigmoid(pairs, o.params.sigmoid.i_max);
      json out_doc = {{"a", fitted.a}, {"b", fitted.b}, {"i_max", fitted.i_max},
                      {"n_pairs", pairs.size()}};
      write_output(o.out, out_doc.dump(2) + "\n");
    } else if (*sim_cmd) {
      const auto profile = resolve_profile(profile_path, alpha, sim_cmd->count("--alpha") > 0);
      const auto input = gesi::read_wav(in_path);
      gesi::HlSimConfig cfg;
      cfg.frontend = o.params.frontend;
      const auto output = gesi::synthesize_hl(input, profile, cfg);
      gesi::write_wav(o.out, output, gesi::WavFormat::kFloat32);
      if (!gains_out.empty()) {
        const auto nh = gesi::ListenerProfile::normal_hearing();
        const auto ep_nh = gesi::analyze_epgram(input, nh, cfg.frontend);
        const auto ep_hl = gesi::analyze_epgram(input, profile, cfg.frontend);
        const auto traj = gesi::gain_trajectory(ep_nh, ep_hl, cfg.smooth_ms);
        std::ostringstream gm;
        for (const auto& row : traj.gains_db) {
          for (size_t t = 0; t < row.size(); ++t) {
            gm << (t ? "," : "") << row[t];
          }
          gm << '\n';
        }
        gesi::write_text_file(gains_out, gm.str());
      }
    } else if (*mix_cmd) {
      const auto speech = gesi::read_wav(speech_path);
      gesi::MonoSignal noise;
      if (!noise_path.empty()) {
        noise = gesi::read_wav(noise_path);
      } else {
        noise.rate_hz = speech.rate_hz;
        noise.samples.resize(speech.samples.size());
        std::mt19937_64 rng(o.seed);
        std::normal_distribution<double> dist(0.0, 0.1);
        for (auto& v : noise.samples) v = dist(rng);
      }
      const auto mixed = gesi::mix_at_snr(speech, noise, o.snr_db);
      gesi::write_wav(o.out, mixed.mixture, gesi::WavFormat::kFloat32);
    } else if (*irm_cmd) {
      const auto clean = gesi::read_wav(clean_path);
      const auto noise = gesi::read_wav(noise_path);
      const auto enhanced = gesi::ideal_ratio_mask(clean, noise, stft, irm_exponent);
      gesi::write_wav(o.out, enhanced, gesi::WavFormat::kFloat32);
    } else if (*reverb_cmd) {
      const auto input = gesi::read_wav(in_path);
      const auto rir = gesi::read_wav(rir_path);
      const auto output = gesi::apply_rir(input, rir);
      gesi::write_wav(o.out, output, gesi::WavFormat::kFloat32);
    } else if (*report_cmd) {
      const auto rows = gesi::parse_prediction_table_csv(read_text_file(table_path));
      fs::create_directories(out_dir);
      if (subsample_k > 0) {
        const auto summary = gesi::subsample_evaluate(rows, subsample_k, repeats, o.seed,
                                                      o.params.sigmoid.i_max);
        std::ostringstream ss;
        ss << "repeat,rmse\n";
        for (size_t i = 0; i < summary.per_repeat_rmse.size(); ++i) {
          ss << i << ',' << summary.per_repeat_rmse[i] << '\n';
        }
        ss << "mean," << summary.mean_rmse << "\nstddev," << summary.stddev_rmse << '\n';
        gesi::write_text_file(out_dir + "/subsample_rmse.csv", ss.str());
      }
      std::vector<gesi::PredictionRow> train;
      if (!train_listeners.empty()) {
        std::set<std::string> ids;
        std::stringstream ss(train_listeners);
        std::string id;
        while (std::getline(ss, id, ',')) ids.insert(id);
        for (const auto& row : rows) {
          if (ids.count(row.record.listener_id)) train.push_back(row);
        }
      } else {
        train = rows;
      }
      auto report = gesi::fit_and_evaluate(train, rows, o.params.sigmoid.i_max);
      report.config_echo = config_echo(o.params, o.seed);
      gesi::write_text_file(out_dir + "/report.csv",
                            "# config: " + report.config_echo + "\n" +
                                gesi::evaluation_report_csv(report));
      gesi::write_text_file(out_dir + "/si_curves.svg", gesi::si_curves_svg(report));
      if (!report.rmse_per_listener.empty()) {
        gesi::write_text_file(out_dir + "/rmse_bars.svg", gesi::rmse_bars_svg(report));
      }
    }
  } catch (const gesi::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const gesi::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
