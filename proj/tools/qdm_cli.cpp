// Command-line front end: dataset generation, training, generation,
// denoising sweeps, evaluation, and image export.
//
// Exit codes: 0 success, 2 usage, 3 I/O, 4 numeric failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdm/channels.hpp"
#include "qdm/dataset.hpp"
#include "qdm/diffusion.hpp"
#include "qdm/imaging.hpp"
#include "qdm/io.hpp"
#include "qdm/metrics.hpp"
#include "qdm/network.hpp"
#include "qdm/training.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct ManifestWriter {
  qdm::RunManifest manifest;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void add(const std::string& path) {
    manifest.artifacts.emplace_back(path, qdm::file_sha256(path));
  }
  void finish(const std::string& out_path) {
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    qdm::write_manifest(manifest, out_path + ".manifest.json");
  }
};

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += " ";
    s += argv[i];
  }
  return s;
}

std::vector<double> parse_eta_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw CLI::ValidationError("--eta", "empty eta list");
  return out;
}

// States file: per-line records of full amplitude vectors for eval/viz.
void save_states(const std::vector<qdm::QubitState>& states, int n_qubits,
                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "qdm-states 1\n";
  out << "qubits " << n_qubits << "\n";
  out << "count " << states.size() << "\n";
  for (const qdm::QubitState& s : states) {
    out << "state";
    for (const qdm::cdouble& a : s.amplitudes()) {
      out << " " << fmt17(a.real()) << " " << fmt17(a.imag());
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<qdm::QubitState> load_states(const std::string& path, int* n_qubits_out) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string tag;
  int version = 0, n_qubits = 0;
  std::size_t count = 0;
  in >> tag >> version;
  if (tag != "qdm-states" || version != 1) {
    throw std::runtime_error("not a states file: " + path);
  }
  in >> tag >> n_qubits;
  if (tag != "qubits" || n_qubits < 1) throw std::runtime_error("bad states header");
  in >> tag >> count;
  if (tag != "count") throw std::runtime_error("bad states header");
  const std::size_t dim = std::size_t{1} << n_qubits;
  std::vector<qdm::QubitState> states;
  for (std::size_t i = 0; i < count; ++i) {
    in >> tag;
    if (tag != "state") throw std::runtime_error("truncated states file");
    std::vector<qdm::cdouble> amps(dim);
    for (qdm::cdouble& a : amps) {
      double re = 0.0, im = 0.0;
      in >> re >> im;
      a = {re, im};
    }
    if (!in) throw std::runtime_error("truncated states file");
    states.emplace_back(n_qubits, std::move(amps));
  }
  if (n_qubits_out) *n_qubits_out = n_qubits;
  return states;
}

qdm::ClassSpec parse_class(const std::string& name, int qubits) {
  qdm::ClassSpec spec;
  spec.n_qubits = qubits;
  if (name == "ghz") {
    spec.state_class = qdm::StateClass::GhzLike;
  } else if (name == "w") {
    spec.state_class = qdm::StateClass::WLike;
  } else {
    throw CLI::ValidationError("--class", "must be ghz or w");
  }
  return spec;
}

int cmd_gen_data(const std::string& cls, int qubits, int count, std::uint64_t seed,
                 const std::string& out_path, const std::string& cmdline) {
  const qdm::ClassSpec spec = parse_class(cls, qubits);
  const qdm::Dataset ds = qdm::make_dataset(spec, count, seed);
  ManifestWriter mw;
  mw.manifest.command_line = cmdline;
  ordered_json cfg{{"command", "gen-data"}, {"class", cls},    {"qubits", qubits},
                   {"count", count},        {"seed", seed},    {"out", out_path}};
  mw.manifest.config_json = cfg.dump();
  qdm::save_dataset(ds, out_path);
  mw.add(out_path);
  mw.finish(out_path);
  std::cout << "wrote " << count << " samples to " << out_path << "\n";
  return 0;
}

int cmd_train(const std::vector<std::string>& data_paths, int steps,
              const std::string& mode, const std::string& loss, int epochs,
              int batch, double lr, const std::string& grad, std::uint64_t seed,
              double noise_scale, int bridge_reset, const std::string& input_mode,
              int workers, double init_span, const std::string& resume_path,
              const std::string& out_path, const std::string& cmdline) {
  std::vector<qdm::TrainSample> samples;
  int n_qubits = 0;
  for (const std::string& p : data_paths) {
    const qdm::Dataset ds = qdm::load_dataset(p);
    if (n_qubits == 0) n_qubits = ds.spec.n_qubits;
    if (ds.spec.n_qubits != n_qubits) {
      throw std::runtime_error("datasets disagree on qubit count");
    }
    for (auto& s : qdm::make_train_samples(ds)) samples.push_back(std::move(s));
  }

  qdm::TrainConfig config;
  const auto m = qdm::mode_from_name(mode);
  const auto l = qdm::loss_from_name(loss);
  const auto g = qdm::grad_from_name(grad);
  if (!m) throw CLI::ValidationError("--mode", "must be endtoend or stepwise");
  if (!l) throw CLI::ValidationError("--loss", "must be mae, infidelity, or l2");
  if (!g) throw CLI::ValidationError("--grad", "must be adjoint, pshift, or fd");
  config.mode = *m;
  config.loss = *l;
  config.grad = *g;
  config.epochs = epochs;
  config.batch_size = batch;
  config.learning_rate = lr;
  config.seed = seed;
  config.workers = workers;
  config.init_span = init_span;
  if (!resume_path.empty()) {
    const qdm::Checkpoint prev = qdm::load_checkpoint(resume_path);
    if (prev.n_qubits != n_qubits) {
      throw std::runtime_error("resume checkpoint qubit count mismatch");
    }
    config.resume_stages = prev.stages;
  }
  config.schedule = qdm::NoiseSchedule::defaults_for(n_qubits);
  if (steps > 0) config.schedule.n_steps = steps;
  if (noise_scale > 0.0) config.schedule.scale = noise_scale;
  if (input_mode == "forward") {
    config.forward_inputs = true;
  } else if (input_mode == "fullnoise") {
    config.forward_inputs = false;
  } else {
    throw CLI::ValidationError("--input", "must be forward or fullnoise");
  }

  const qdm::QunetNetwork net = qdm::make_network(n_qubits, bridge_reset);
  if (epochs == 0) {
    std::cerr << "warning: --epochs 0, checkpoint holds initialization parameters\n";
  }
  const qdm::Checkpoint ck = qdm::train(config, samples, net);
  if (!std::isfinite(ck.meta.final_loss)) {
    std::cerr << "error: training produced non-finite loss\n";
    return kExitNumeric;
  }
  ManifestWriter mw;
  mw.manifest.command_line = cmdline;
  ordered_json cfg{{"command", "train"},
                   {"data", data_paths},
                   {"steps", config.schedule.n_steps},
                   {"mode", mode},
                   {"loss", loss},
                   {"epochs", epochs},
                   {"batch", batch},
                   {"lr", lr},
                   {"grad", grad},
                   {"seed", seed},
                   {"noise_scale", config.schedule.scale},
                   {"init_span", init_span},
                   {"resume", resume_path},
                   {"bridge_reset", bridge_reset},
                   {"input", input_mode},
                   {"out", out_path}};
  mw.manifest.config_json = cfg.dump();
  qdm::save_checkpoint(ck, out_path);
  mw.add(out_path);
  mw.finish(out_path);
  std::cout << "final loss " << ck.meta.final_loss << " after "
            << ck.meta.loss_curve.size() << " recorded epochs\n";
  return 0;
}

int cmd_generate(const std::string& model, int count, std::uint64_t seed,
                 const std::string& cls, const std::string& out_path,
                 const std::string& images_dir, const std::string& cmdline) {
  const qdm::Checkpoint ck = qdm::load_checkpoint(model);
  const int n = ck.n_qubits;
  std::vector<qdm::QubitState> finals;
  std::vector<qdm::ProbDist> dists;
  ManifestWriter mw;
  mw.manifest.command_line = cmdline;
  ordered_json cfg{{"command", "generate"}, {"model", model}, {"count", count},
                   {"seed", seed},          {"class", cls},   {"out", out_path}};
  mw.manifest.config_json = cfg.dump();

  for (int i = 0; i < count; ++i) {
    qdm::Rng rng = qdm::Rng::stream(seed, {0x67656e75u, static_cast<std::uint64_t>(i)});
    const qdm::QubitState initial = qdm::sample_full_noise_state(n, rng);
    const qdm::GenerationResult res = qdm::generate(ck, initial);
    dists.push_back(qdm::probabilities(res.final));
    if (!images_dir.empty()) {
      const std::string stem = images_dir + "/state" + std::to_string(i);
      qdm::export_pgm(qdm::dist_to_image(qdm::probabilities(initial), n),
                      stem + "_initial.pgm");
      qdm::export_pgm(qdm::dist_to_image(qdm::probabilities(res.first_bridge), n),
                      stem + "_mid.pgm");
      qdm::export_pgm(qdm::dist_to_image(dists.back(), n), stem + "_final.pgm");
      mw.add(stem + "_initial.pgm");
      mw.add(stem + "_mid.pgm");
      mw.add(stem + "_final.pgm");
    }
    finals.push_back(res.final);
  }

  const qdm::ClassSpec spec = parse_class(cls, n);
  const qdm::SuccessReport report = qdm::q_average(dists, spec);
  save_states(finals, n, out_path);
  mw.add(out_path);
  {
    qdm::PlotSeries series{"p_succ", {}, {}};
    for (std::size_t i = 0; i < report.per_state.size(); ++i) {
      series.x.push_back(static_cast<double>(i));
      series.y.push_back(report.per_state[i]);
    }
    qdm::export_plotdata({series}, out_path + ".plot.tsv");
    mw.add(out_path + ".plot.tsv");
  }
  std::ofstream rep(out_path + ".report.txt");
  rep << "class " << cls << "\ncount " << count << "\nQ " << fmt17(report.q) << "\n";
  for (std::size_t i = 0; i < report.per_state.size(); ++i) {
    rep << "p_succ " << i << " " << fmt17(report.per_state[i]) << "\n";
  }
  rep.close();
  mw.add(out_path + ".report.txt");
  mw.finish(out_path);
  std::cout << "Q " << report.q << " over " << count << " states\n";
  return 0;
}

int cmd_denoise(const std::string& model, const std::string& data_path,
                const std::string& noise, const std::string& eta_text, double p,
                int trajectories, std::uint64_t seed, const std::string& out_path,
                const std::string& cmdline) {
  const qdm::Checkpoint ck = qdm::load_checkpoint(model);
  const qdm::Dataset ds = qdm::load_dataset(data_path);
  if (ds.spec.n_qubits != ck.n_qubits) {
    throw std::runtime_error("dataset/model qubit mismatch");
  }
  qdm::ChannelKind kind;
  if (noise == "e1") kind = qdm::ChannelKind::EpsilonI;
  else if (noise == "e2") kind = qdm::ChannelKind::EpsilonII;
  else if (noise == "e3") kind = qdm::ChannelKind::EpsilonIII;
  else throw CLI::ValidationError("--noise", "must be e1, e2, or e3");
  const std::vector<double> etas = parse_eta_list(eta_text);

  ManifestWriter mw;
  mw.manifest.command_line = cmdline;
  ordered_json cfg{{"command", "denoise"}, {"model", model}, {"data", data_path},
                   {"noise", noise},       {"eta", eta_text}, {"p", p},
                   {"trajectories", trajectories}, {"seed", seed}, {"out", out_path}};
  mw.manifest.config_json = cfg.dump();

  std::ofstream rep(out_path);
  if (!rep) throw std::runtime_error("cannot open " + out_path);
  rep << "eta\tsample\tp_succ_before\tp_succ_after\tfidelity\t"
         "mse_before\tpsnr_before\tmse_after\tpsnr_after\n";
  qdm::PlotSeries succ_curve{"success", {}, {}}, fid_curve{"fidelity", {}, {}};

  for (double eta : etas) {
    qdm::ChannelSpec channel;
    channel.kind = kind;
    channel.eta = eta;
    channel.p = p;
    channel.validate(ck.n_qubits);
    double succ_sum = 0.0, fid_sum = 0.0;
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
      const qdm::QubitState clean = qdm::class_state(ds.samples[i]);
      double sample_succ = 0.0, sample_fid = 0.0, before_succ = 0.0;
      qdm::ProbDist before_mean, after_mean;
      before_mean.probs.assign(clean.dim(), 0.0);
      after_mean.probs.assign(clean.dim(), 0.0);
      for (int t = 0; t < trajectories; ++t) {
        qdm::Rng rng = qdm::Rng::stream(
            seed, {0x64656e6fu, static_cast<std::uint64_t>(eta * 1e6),
                   static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(t)});
        const qdm::QubitState noisy = qdm::apply_channel_trajectory(clean, channel, rng);
        const qdm::GenerationResult res = qdm::generate(ck, noisy);
        const qdm::ProbDist pd_before = qdm::probabilities(noisy);
        const qdm::ProbDist pd_after = qdm::probabilities(res.final);
        before_succ += qdm::p_succ(pd_before, ds.spec);
        sample_succ += qdm::p_succ(pd_after, ds.spec);
        sample_fid += qdm::fidelity_report(clean, res.final);
        for (std::size_t k = 0; k < clean.dim(); ++k) {
          before_mean.probs[k] += pd_before[k];
          after_mean.probs[k] += pd_after[k];
        }
      }
      const double inv = 1.0 / trajectories;
      sample_succ *= inv;
      sample_fid *= inv;
      before_succ *= inv;
      for (auto& v : before_mean.probs) v *= inv;
      for (auto& v : after_mean.probs) v *= inv;
      const qdm::StateImage clean_img =
          qdm::dist_to_image(qdm::probabilities(clean), ck.n_qubits);
      const qdm::ImageMetrics im_before = qdm::image_metrics(
          clean_img, qdm::dist_to_image(before_mean, ck.n_qubits));
      const qdm::ImageMetrics im_after = qdm::image_metrics(
          clean_img, qdm::dist_to_image(after_mean, ck.n_qubits));
      rep << fmt17(eta) << "\t" << i << "\t" << fmt17(before_succ) << "\t"
          << fmt17(sample_succ) << "\t" << fmt17(sample_fid) << "\t"
          << fmt17(im_before.mse) << "\t" << fmt17(im_before.psnr) << "\t"
          << fmt17(im_after.mse) << "\t" << fmt17(im_after.psnr) << "\n";
      succ_sum += sample_succ;
      fid_sum += sample_fid;
    }
    succ_curve.x.push_back(eta);
    succ_curve.y.push_back(succ_sum / ds.samples.size());
    fid_curve.x.push_back(eta);
    fid_curve.y.push_back(fid_sum / ds.samples.size());
    std::cout << "eta " << eta << ": mean success "
              << succ_sum / ds.samples.size() << ", mean fidelity "
              << fid_sum / ds.samples.size() << "\n";
  }
  rep.close();
  qdm::export_plotdata({succ_curve, fid_curve}, out_path + ".plot.tsv");
  mw.add(out_path);
  mw.add(out_path + ".plot.tsv");
  mw.finish(out_path);
  return 0;
}

int cmd_eval(const std::string& states_path, const std::string& cls,
             const std::string& out_path, const std::string& cmdline) {
  int n_qubits = 0;
  const std::vector<qdm::QubitState> states = load_states(states_path, &n_qubits);
  const qdm::ClassSpec spec = parse_class(cls, n_qubits);
  std::vector<qdm::ProbDist> dists;
  for (const auto& s : states) dists.push_back(qdm::probabilities(s));
  const qdm::SuccessReport report = qdm::q_average(dists, spec);
  ManifestWriter mw;
  mw.manifest.command_line = cmdline;
  ordered_json cfg{{"command", "eval"}, {"states", states_path}, {"class", cls},
                   {"out", out_path}};
  mw.manifest.config_json = cfg.dump();
  std::ofstream rep(out_path);
  if (!rep) throw std::runtime_error("cannot open " + out_path);
  rep << "class " << cls << "\ncount " << states.size() << "\nQ "
      << fmt17(report.q) << "\n";
  for (std::size_t i = 0; i < report.per_state.size(); ++i) {
    rep << "p_succ " << i << " " << fmt17(report.per_state[i]) << "\n";
  }
  rep.close();
  mw.add(out_path);
  mw.finish(out_path);
  std::cout << "Q " << report.q << "\n";
  return 0;
}

int cmd_viz(const std::string& states_path, int index, const std::string& out_path,
            const std::string& cmdline) {
  int n_qubits = 0;
  const std::vector<qdm::QubitState> states = load_states(states_path, &n_qubits);
  if (index < 0 || static_cast<std::size_t>(index) >= states.size()) {
    std::cerr << "error: --index out of range\n";
    return kExitUsage;
  }
  ManifestWriter mw;
  mw.manifest.command_line = cmdline;
  ordered_json cfg{{"command", "viz"}, {"states", states_path}, {"index", index},
                   {"out", out_path}};
  mw.manifest.config_json = cfg.dump();
  qdm::export_pgm(
      qdm::dist_to_image(qdm::probabilities(states[index]), n_qubits), out_path);
  mw.add(out_path);
  mw.finish(out_path);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum denoising model toolkit"};
  app.require_subcommand(1);
  const std::string cmdline = join_args(argc, argv);

  // gen-data
  auto* gen_data = app.add_subcommand("gen-data", "sample a class dataset");
  std::string gd_class = "ghz", gd_out;
  int gd_qubits = 8, gd_count = 500;
  std::uint64_t gd_seed = 1;
  gen_data->add_option("--class", gd_class, "ghz|w");
  gen_data->add_option("--qubits", gd_qubits)->check(CLI::Range(1, 24));
  gen_data->add_option("--count", gd_count)->check(CLI::PositiveNumber);
  gen_data->add_option("--seed", gd_seed);
  gen_data->add_option("--out", gd_out)->required();

  // train
  auto* train = app.add_subcommand("train", "train the network on datasets");
  std::vector<std::string> tr_data;
  std::string tr_mode = "endtoend", tr_loss = "mae", tr_grad = "adjoint";
  std::string tr_input = "forward", tr_out;
  int tr_steps = 0, tr_epochs = 150, tr_batch = 50, tr_bridge = 0, tr_workers = 1;
  double tr_init_span = 0.1;
  std::string tr_resume;
  double tr_lr = 0.01, tr_scale = 0.0;
  std::uint64_t tr_seed = 1;
  train->add_option("--data", tr_data, "dataset file(s)")->required();
  train->add_option("--steps", tr_steps, "forward steps (0 = per-qubit default)");
  train->add_option("--mode", tr_mode, "endtoend|stepwise");
  train->add_option("--loss", tr_loss, "mae|infidelity|l2");
  train->add_option("--epochs", tr_epochs)->check(CLI::NonNegativeNumber);
  train->add_option("--batch", tr_batch)->check(CLI::PositiveNumber);
  train->add_option("--lr", tr_lr)->check(CLI::PositiveNumber);
  train->add_option("--grad", tr_grad, "adjoint|pshift|fd");
  train->add_option("--seed", tr_seed);
  train->add_option("--noise-scale", tr_scale, "schedule scale (0 = default)");
  train->add_option("--bridge-reset", tr_bridge, "qubits reset at the bottleneck");
  train->add_option("--input", tr_input, "forward|fullnoise");
  train->add_option("--workers", tr_workers)->check(CLI::PositiveNumber);
  train->add_option("--init-span", tr_init_span,
                    "half-width of uniform parameter initialization");
  train->add_option("--resume", tr_resume, "checkpoint to continue training from");
  train->add_option("--out", tr_out)->required();

  // generate
  auto* generate = app.add_subcommand("generate", "generate states from a model");
  std::string ge_model, ge_class = "ghz", ge_out, ge_images;
  int ge_count = 100;
  std::uint64_t ge_seed = 1;
  generate->add_option("--model", ge_model)->required();
  generate->add_option("--count", ge_count)->check(CLI::PositiveNumber);
  generate->add_option("--seed", ge_seed);
  generate->add_option("--class", ge_class, "ghz|w (success metric)");
  generate->add_option("--out", ge_out)->required();
  generate->add_option("--images", ge_images, "directory for PGM triptychs");

  // denoise
  auto* denoise = app.add_subcommand("denoise", "corrupt and denoise a dataset");
  std::string dn_model, dn_data, dn_noise = "e1", dn_eta = "0.25", dn_out;
  double dn_p = 0.75;
  int dn_traj = 20;
  std::uint64_t dn_seed = 1;
  denoise->add_option("--model", dn_model)->required();
  denoise->add_option("--data", dn_data)->required();
  denoise->add_option("--noise", dn_noise, "e1|e2|e3");
  denoise->add_option("--eta", dn_eta, "noise level(s), comma separated");
  denoise->add_option("--p", dn_p, "epsilon-II mixing weight");
  denoise->add_option("--trajectories", dn_traj)->check(CLI::PositiveNumber);
  denoise->add_option("--seed", dn_seed);
  denoise->add_option("--out", dn_out)->required();

  // eval
  auto* eval = app.add_subcommand("eval", "recompute metrics from stored states");
  std::string ev_states, ev_class = "ghz", ev_out;
  eval->add_option("--states", ev_states)->required();
  eval->add_option("--class", ev_class, "ghz|w");
  eval->add_option("--out", ev_out)->required();

  // viz
  auto* viz = app.add_subcommand("viz", "render a stored state to PGM");
  std::string vz_states, vz_out;
  int vz_index = 0;
  viz->add_option("--states", vz_states)->required();
  viz->add_option("--index", vz_index);
  viz->add_option("--out", vz_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen_data) {
      return cmd_gen_data(gd_class, gd_qubits, gd_count, gd_seed, gd_out, cmdline);
    }
    if (*train) {
      return cmd_train(tr_data, tr_steps, tr_mode, tr_loss, tr_epochs, tr_batch,
                       tr_lr, tr_grad, tr_seed, tr_scale, tr_bridge, tr_input,
                       tr_workers, tr_init_span, tr_resume, tr_out, cmdline);
    }
    if (*generate) {
      return cmd_generate(ge_model, ge_count, ge_seed, ge_class, ge_out, ge_images,
                          cmdline);
    }
    if (*denoise) {
      return cmd_denoise(dn_model, dn_data, dn_noise, dn_eta, dn_p, dn_traj, dn_seed,
                         dn_out, cmdline);
    }
    if (*eval) return cmd_eval(ev_states, ev_class, ev_out, cmdline);
    if (*viz) return cmd_viz(vz_states, vz_index, vz_out, cmdline);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    std::cerr << "error: " << what << "\n";
    const bool io = what.find("open") != std::string::npos ||
                    what.find("write failed") != std::string::npos ||
                    what.find("file") != std::string::npos;
    return io ? kExitIo : kExitNumeric;
  }
  return kExitUsage;
}
