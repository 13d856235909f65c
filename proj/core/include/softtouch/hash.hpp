#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "softtouch/types.hpp"

namespace softtouch {

/// Incremental SHA-256.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t n);
  void update(std::string_view s) { update(s.data(), s.size()); }
  /// Lowercase hex digest. The hasher cannot be updated afterwards.
  std::string hex();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::string sha256_hex(std::string_view data);

/// Hash over every episode's metadata, frames, labels and phase marks.
std::string dataset_fingerprint(const Dataset& episodes);

}  // namespace softtouch
