#pragma once

// File cache for computed results. One json file per key; writes go to a
// temporary file that is renamed into place, so readers never see a partial
// entry. Unreadable or mismatched entries count as misses.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unistd.h>

#include "qwedge/report/report.hpp"

namespace qwedge {

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Key of an operation: its name, canonical parameters and the points used.
inline std::string cache_key(const std::string& op, const json& params, const std::vector<PrimePoint>& points) {
  std::string pts;
  for (const auto& p : points) pts += std::to_string(p.prime) + ":" + std::to_string(p.q_value) + ";";
  const std::string text = op + "\n" + params.dump() + "\n" + pts;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
  return buf;
}

class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path dir, int engine_version = kEngineVersion)
      : dir_(std::move(dir)), version_(engine_version) {
    std::filesystem::create_directories(dir_);
  }

  const std::filesystem::path& dir() const { return dir_; }

  std::optional<json> get(const std::string& key) const {
    const auto path = dir_ / (key + ".json");
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
      const json j = json::parse(in);
      if (j.at("key").get<std::string>() != key || j.at("engine_version").get<int>() != version_) return std::nullopt;
      ++hits_;
      return j.at("value");
    } catch (const std::exception& e) {
      std::cerr << "qwedge: ignoring corrupt cache entry " << path << ": " << e.what() << "\n";
      return std::nullopt;
    }
  }

  void put(const std::string& key, const json& value) const {
    static std::atomic<unsigned> counter{0};
    const json j{{"key", key}, {"engine_version", version_}, {"value", value}};
    const auto tmp = dir_ / ("." + key + "." + std::to_string(::getpid()) + "." + std::to_string(counter++) + ".tmp");
    {
      std::ofstream out(tmp, std::ios::trunc);
      out << j.dump() << "\n";
      if (!out) throw std::runtime_error("cannot write cache entry " + tmp.string());
    }
    std::filesystem::rename(tmp, dir_ / (key + ".json"));
  }

  std::size_t hits() const { return hits_; }

 private:
  std::filesystem::path dir_;
  int version_;
  mutable std::atomic<std::size_t> hits_{0};
};

}  // namespace qwedge
