#ifndef RELREWARD_RL_CHECKPOINT_HPP_
#define RELREWARD_RL_CHECKPOINT_HPP_

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "relreward/hash.hpp"
#include "relreward/rl/ppo.hpp"

namespace relreward::rl {

// Layout (little-endian): magic "RRPOLICY", u32 version, 32-byte SHA-256 of
// the run config, then for actor and critic: u32 layer-size count, u32 sizes,
// f64 parameters.
inline constexpr char kCheckpointMagic[8] = {'R', 'R', 'P', 'O', 'L', 'I', 'C', 'Y'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

template <class T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <class T>
T take(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw std::invalid_argument("checkpoint is truncated");
  T v;
  std::memcpy(&v, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

inline void put_net(std::string& out, const Mlp& net) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(net.sizes().size()));
  for (int s : net.sizes()) put<std::uint32_t>(out, static_cast<std::uint32_t>(s));
  out.append(reinterpret_cast<const char*>(net.params.data()),
             sizeof(double) * static_cast<std::size_t>(net.params.size()));
}

inline Mlp take_net(const std::string& in, std::size_t& pos) {
  auto count = take<std::uint32_t>(in, pos);
  if (count < 2 || count > 64) throw std::invalid_argument("checkpoint has a corrupt layer table");
  std::vector<int> sizes;
  for (std::uint32_t i = 0; i < count; ++i) {
    auto s = take<std::uint32_t>(in, pos);
    if (s == 0 || s > (1u << 20)) throw std::invalid_argument("checkpoint has a corrupt layer size");
    sizes.push_back(static_cast<int>(s));
  }
  Mlp net(sizes);
  std::size_t bytes = sizeof(double) * static_cast<std::size_t>(net.params.size());
  if (pos + bytes > in.size()) throw std::invalid_argument("checkpoint is truncated");
  std::memcpy(net.params.data(), in.data() + pos, bytes);
  pos += bytes;
  return net;
}

}  // namespace detail

inline std::string serialize_checkpoint(const ActorCritic& ac, const std::string& config_text) {
  std::string out(kCheckpointMagic, sizeof(kCheckpointMagic));
  detail::put<std::uint32_t>(out, kCheckpointVersion);
  auto h = sha256_bytes(config_text);
  out.append(reinterpret_cast<const char*>(h.data()), h.size());
  detail::put_net(out, ac.actor);
  detail::put_net(out, ac.critic);
  return out;
}

struct LoadedCheckpoint {
  ActorCritic policy;
  std::string config_sha256;
};

// When expected_config_text is non-empty, the embedded hash must match it.
inline LoadedCheckpoint deserialize_checkpoint(const std::string& blob,
                                               const std::string& expected_config_text = {}) {
  if (blob.size() < sizeof(kCheckpointMagic) ||
      std::memcmp(blob.data(), kCheckpointMagic, sizeof(kCheckpointMagic)) != 0) {
    throw std::invalid_argument("not a policy checkpoint");
  }
  std::size_t pos = sizeof(kCheckpointMagic);
  auto version = detail::take<std::uint32_t>(blob, pos);
  if (version != kCheckpointVersion) {
    throw std::invalid_argument("unsupported checkpoint version " + std::to_string(version));
  }
  if (pos + 32 > blob.size()) throw std::invalid_argument("checkpoint is truncated");
  LoadedCheckpoint out;
  out.config_sha256 = to_hex(reinterpret_cast<const unsigned char*>(blob.data() + pos), 32);
  pos += 32;
  out.policy.actor = detail::take_net(blob, pos);
  out.policy.critic = detail::take_net(blob, pos);
  if (pos != blob.size()) throw std::invalid_argument("checkpoint has trailing bytes");
  if (!expected_config_text.empty() && sha256_hex(expected_config_text) != out.config_sha256) {
    throw std::invalid_argument("checkpoint was written for a different config");
  }
  return out;
}

inline void save_checkpoint(const std::string& path, const ActorCritic& ac,
                            const std::string& config_text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << serialize_checkpoint(ac, config_text);
}

inline LoadedCheckpoint load_checkpoint(const std::string& path,
                                        const std::string& expected_config_text = {}) {
  return deserialize_checkpoint(read_file_bytes(path), expected_config_text);
}

}  // namespace relreward::rl

#endif  // RELREWARD_RL_CHECKPOINT_HPP_
