#include "softtouch/hash.hpp"

#include <openssl/evp.h>

#include <stdexcept>

#include "softtouch/dataset_io.hpp"

namespace softtouch {

struct Sha256::Impl {
  EVP_MD_CTX* ctx = nullptr;
  bool finished = false;
};

Sha256::Sha256() : impl_(std::make_unique<Impl>()) {
  impl_->ctx = EVP_MD_CTX_new();
  if (!impl_->ctx || EVP_DigestInit_ex(impl_->ctx, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256: digest init failed");
  }
}

Sha256::~Sha256() { EVP_MD_CTX_free(impl_->ctx); }

void Sha256::update(const void* data, std::size_t n) {
  if (impl_->finished) throw std::logic_error("sha256: update after final");
  EVP_DigestUpdate(impl_->ctx, data, n);
}

std::string Sha256::hex() {
  if (impl_->finished) throw std::logic_error("sha256: digest already taken");
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(impl_->ctx, md, &len);
  impl_->finished = true;
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += digits[md[i] >> 4];
    out += digits[md[i] & 0xf];
  }
  return out;
}

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data);
  return h.hex();
}

std::string dataset_fingerprint(const Dataset& episodes) {
  Sha256 h;
  for (const auto& ep : episodes) {
    h.update(io::meta_to_json(ep.meta));
    for (std::size_t i = 0; i < ep.size(); ++i) {
      const auto& f = ep.frames[i];
      h.update(&f.t, sizeof f.t);
      h.update(&f.input_pressure, sizeof f.input_pressure);
      h.update(&f.strain, sizeof f.strain);
      h.update(f.taxels.data(), sizeof(double) * f.taxels.size());
      const auto l = ep.labels[i].as_array();
      h.update(l.data(), sizeof(double) * l.size());
      const unsigned char mark[2] = {static_cast<unsigned char>(ep.phases[i].phase),
                                     static_cast<unsigned char>(ep.phases[i].is_slipping)};
      h.update(mark, 2);
    }
  }
  return h.hex();
}

}  // namespace softtouch
