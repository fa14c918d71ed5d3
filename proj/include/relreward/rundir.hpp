#ifndef RELREWARD_RUNDIR_HPP_
#define RELREWARD_RUNDIR_HPP_

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "relreward/clock.hpp"
#include "relreward/hash.hpp"

#ifndef RELREWARD_REVISION
#define RELREWARD_REVISION "unknown"
#endif

namespace relreward {

namespace fs = std::filesystem;

inline constexpr const char* kManifestName = "manifest.json";

// Creates runs_root/<game>_<mode>_<seed>_<UTC stamp>/. An existing directory
// is never reused: a clash gets a numeric suffix (_2, _3, ...).
inline fs::path create_run_dir(const fs::path& runs_root, const std::string& game,
                               const std::string& mode, std::uint64_t seed) {
  fs::create_directories(runs_root);
  const std::string base = game + "_" + mode + "_" + std::to_string(seed) + "_" + compact_utc_stamp();
  for (int k = 1; k < 10000; ++k) {
    fs::path p = runs_root / (k == 1 ? base : base + "_" + std::to_string(k));
    if (fs::create_directory(p)) return p;
  }
  throw std::runtime_error("cannot find a free run directory name under '" + runs_root.string() + "'");
}

// What produced a run directory. Inputs are hashed at their original paths,
// outputs relative to the run directory.
class RunManifest {
 public:
  RunManifest(std::vector<std::string> command, nlohmann::ordered_json config)
      : command_(std::move(command)), config_(std::move(config)), started_at_(utc_timestamp()) {}

  void add_input(const std::string& role, const fs::path& path) {
    inputs_.push_back({{"role", role},
                       {"path", fs::absolute(path).lexically_normal().string()},
                       {"sha256", sha256_file(path.string())}});
  }

  // Writes manifest.json into `dir`, hashing the listed output files. Refuses
  // to replace an existing manifest.
  void write(const fs::path& dir, const std::vector<std::string>& outputs) {
    const fs::path path = dir / kManifestName;
    if (fs::exists(path)) throw std::runtime_error("'" + path.string() + "' already exists");
    nlohmann::ordered_json j;
    j["command"] = command_;
    j["config"] = config_;
    j["revision"] = RELREWARD_REVISION;
    j["started_at"] = started_at_;
    j["finished_at"] = utc_timestamp();
    j["inputs"] = inputs_;
    nlohmann::ordered_json outs = nlohmann::ordered_json::array();
    for (const auto& name : outputs) {
      outs.push_back({{"path", name}, {"sha256", sha256_file((dir / name).string())}});
    }
    j["outputs"] = std::move(outs);
    std::ofstream f(path, std::ios::binary);
    if (!(f << j.dump(2) << "\n")) throw std::runtime_error("cannot write '" + path.string() + "'");
  }

 private:
  std::vector<std::string> command_;
  nlohmann::ordered_json config_;
  std::string started_at_;
  nlohmann::ordered_json inputs_ = nlohmann::ordered_json::array();
};

struct ManifestCheck {
  std::vector<std::string> problems;  // hash mismatches or missing outputs
  std::vector<std::string> notes;     // inputs no longer at their recorded path

  bool ok() const { return problems.empty(); }
};

// Re-hashes every output (and every input still present) of a run directory.
inline ManifestCheck verify_manifest(const fs::path& dir) {
  ManifestCheck out;
  const fs::path path = dir / kManifestName;
  if (!fs::exists(path)) {
    out.problems.push_back("no " + std::string(kManifestName) + " in '" + dir.string() + "'");
    return out;
  }
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(read_file_bytes(path.string()));
    for (const char* key : {"command", "config", "revision", "started_at", "finished_at", "inputs", "outputs"}) {
      if (!j.contains(key)) out.problems.push_back("manifest lacks '" + std::string(key) + "'");
    }
    if (!out.ok()) return out;
    for (const auto& o : j.at("outputs")) {
      const fs::path p = dir / o.at("path").get<std::string>();
      if (!fs::exists(p)) {
        out.problems.push_back("output '" + p.string() + "' is missing");
      } else if (sha256_file(p.string()) != o.at("sha256").get<std::string>()) {
        out.problems.push_back("output '" + p.string() + "' does not match its recorded hash");
      }
    }
    for (const auto& i : j.at("inputs")) {
      const std::string p = i.at("path").get<std::string>();
      if (!fs::exists(p)) {
        out.notes.push_back("input '" + p + "' is no longer present");
      } else if (sha256_file(p) != i.at("sha256").get<std::string>()) {
        out.problems.push_back("input '" + p + "' changed since the run");
      }
    }
  } catch (const nlohmann::ordered_json::exception& e) {
    out.problems.push_back("malformed manifest: " + std::string(e.what()));
  }
  return out;
}

}  // namespace relreward

#endif  // RELREWARD_RUNDIR_HPP_
