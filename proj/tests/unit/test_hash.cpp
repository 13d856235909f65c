#include <gtest/gtest.h>

#include "softtouch/hash.hpp"

using namespace softtouch;

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Sha256, IncrementalEqualsOneShot) {
  Sha256 h;
  h.update("ab");
  h.update("c");
  EXPECT_EQ(h.hex(), sha256_hex("abc"));
}

TEST(DatasetFingerprint, SensitiveToEveryPart) {
  Episode ep;
  ep.frames.resize(3);
  ep.labels.resize(3);
  ep.phases.resize(3);
  for (std::size_t i = 0; i < 3; ++i) ep.frames[i].t = static_cast<double>(i) * kSamplePeriod;
  const Dataset base{ep};
  const auto ref = dataset_fingerprint(base);
  EXPECT_EQ(ref, dataset_fingerprint(base));
  EXPECT_EQ(ref.size(), 64u);

  auto d = base;
  d[0].frames[1].taxels[4] = 1e-12;
  EXPECT_NE(dataset_fingerprint(d), ref);
  d = base;
  d[0].labels[2].fz = -1.0;
  EXPECT_NE(dataset_fingerprint(d), ref);
  d = base;
  d[0].phases[2].phase = Phase::Moving;
  EXPECT_NE(dataset_fingerprint(d), ref);
  d = base;
  d[0].meta.repetition = 2;
  EXPECT_NE(dataset_fingerprint(d), ref);
}
