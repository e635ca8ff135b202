#include "qdm/io.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qdm {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_template(std::ostream& out, const char* label, const BlockTemplate& t) {
  out << "template " << label << " " << t.recipe.size();
  for (const BlockTemplate::Entry& e : t.recipe) {
    out << " " << gate_name(e.kind) << " " << e.rel0 << " " << e.rel1;
  }
  out << "\n";
}

BlockTemplate read_template(std::istream& in, const std::string& label,
                            BlockTemplate::Role role) {
  std::string tag, got;
  std::size_t count = 0;
  in >> tag >> got >> count;
  if (tag != "template" || got != label) {
    throw std::runtime_error("checkpoint: missing " + label + " template");
  }
  BlockTemplate t;
  t.role = role;
  for (std::size_t i = 0; i < count; ++i) {
    std::string name;
    BlockTemplate::Entry e;
    in >> name >> e.rel0 >> e.rel1;
    const auto kind = gate_from_name(name);
    if (!kind) throw std::runtime_error("checkpoint: unknown gate " + name);
    e.kind = *kind;
    t.recipe.push_back(e);
  }
  if (!in) throw std::runtime_error("checkpoint: truncated template");
  t.validate();
  return t;
}

}  // namespace

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
  checkpoint.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  out << "qdm-checkpoint " << checkpoint.format_version << "\n";
  out << "qubits " << checkpoint.n_qubits << "\n";
  out << "bridge_reset " << checkpoint.bridge_reset << "\n";
  write_template(out, "disentangler", checkpoint.disentangler_template);
  write_template(out, "isometry", checkpoint.isometry_template);
  out << "stages " << checkpoint.stages.size() << "\n";
  for (const ParamVector& stage : checkpoint.stages) {
    out << "stage " << stage.size();
    for (double v : stage.values) out << " " << fmt17(v);
    out << "\n";
  }
  const CheckpointMeta& m = checkpoint.meta;
  out << "meta mode " << m.mode << "\n";
  out << "meta loss " << m.loss << "\n";
  out << "meta grad " << m.grad << "\n";
  out << "meta epochs " << m.epochs << "\n";
  out << "meta batch_size " << m.batch_size << "\n";
  out << "meta learning_rate " << fmt17(m.learning_rate) << "\n";
  out << "meta seed " << m.seed << "\n";
  out << "meta n_steps " << m.n_steps << "\n";
  out << "meta noise_scale " << fmt17(m.noise_scale) << "\n";
  out << "meta final_loss " << fmt17(m.final_loss) << "\n";
  out << "loss_curve " << m.loss_curve.size();
  for (double v : m.loss_curve) out << " " << fmt17(v);
  out << "\n";
  if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  Checkpoint ck;
  std::string tag;
  in >> tag >> ck.format_version;
  if (tag != "qdm-checkpoint") {
    throw std::runtime_error("load_checkpoint: not a checkpoint file");
  }
  if (ck.format_version != 1) {
    throw std::runtime_error("load_checkpoint: unsupported format version");
  }
  in >> tag >> ck.n_qubits;
  if (tag != "qubits") throw std::runtime_error("load_checkpoint: missing qubits");
  in >> tag >> ck.bridge_reset;
  if (tag != "bridge_reset") {
    throw std::runtime_error("load_checkpoint: missing bridge_reset");
  }
  ck.disentangler_template =
      read_template(in, "disentangler", BlockTemplate::Role::Disentangler);
  ck.isometry_template = read_template(in, "isometry", BlockTemplate::Role::Isometry);
  std::size_t n_stages = 0;
  in >> tag >> n_stages;
  if (tag != "stages") throw std::runtime_error("load_checkpoint: missing stages");
  for (std::size_t s = 0; s < n_stages; ++s) {
    std::size_t len = 0;
    in >> tag >> len;
    if (tag != "stage") throw std::runtime_error("load_checkpoint: missing stage");
    ParamVector stage;
    stage.values.resize(len);
    for (double& v : stage.values) in >> v;
    ck.stages.push_back(std::move(stage));
  }
  while (in >> tag) {
    if (tag == "meta") {
      std::string key;
      in >> key;
      CheckpointMeta& m = ck.meta;
      if (key == "mode") in >> m.mode;
      else if (key == "loss") in >> m.loss;
      else if (key == "grad") in >> m.grad;
      else if (key == "epochs") in >> m.epochs;
      else if (key == "batch_size") in >> m.batch_size;
      else if (key == "learning_rate") in >> m.learning_rate;
      else if (key == "seed") in >> m.seed;
      else if (key == "n_steps") in >> m.n_steps;
      else if (key == "noise_scale") in >> m.noise_scale;
      else if (key == "final_loss") in >> m.final_loss;
      else throw std::runtime_error("load_checkpoint: unknown meta key " + key);
    } else if (tag == "loss_curve") {
      std::size_t len = 0;
      in >> len;
      ck.meta.loss_curve.resize(len);
      for (double& v : ck.meta.loss_curve) in >> v;
    } else {
      throw std::runtime_error("load_checkpoint: unexpected token " + tag);
    }
  }
  if (in.bad()) throw std::runtime_error("load_checkpoint: read failed");
  ck.validate();
  return ck;
}

std::string file_sha256(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("file_sha256: cannot open " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("file_sha256: digest init failed");
  }
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  nlohmann::ordered_json j;
  j["manifest_version"] = manifest.version;
  j["command_line"] = manifest.command_line;
  j["config"] = manifest.config_json.empty()
                    ? nlohmann::ordered_json::object()
                    : nlohmann::ordered_json::parse(manifest.config_json);
  nlohmann::ordered_json arts = nlohmann::ordered_json::object();
  for (const auto& [p, sum] : manifest.artifacts) arts[p] = sum;
  j["artifacts"] = arts;
  j["wall_seconds"] = manifest.wall_seconds;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_manifest: cannot open " + path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write_manifest: write failed for " + path);
}

}  // namespace qdm
