#include <gtest/gtest.h>

#include "rivid/data/protocol.hpp"
#include "rivid/data/synth.hpp"
#include "test_utils.hpp"

using namespace rivid;
using rivid::test::TempDir;

namespace {

SynthOutput make_corpus(const fs::path& dir, int ids = 4, int per_id = 4) {
  SynthSpec s;
  s.n_identities = ids;
  s.images_per_identity = per_id;
  s.canvas_height = 64;
  s.canvas_width = 32;
  s.seed = 11;
  return synth_corpus(s, dir);
}

}  // namespace

TEST(Protocol, VrWidthsStayInRange) {
  TempDir corpus("proto_src"), out("proto_out");
  auto synth = make_corpus(corpus.path(), 4, 8);
  DegradeProtocol p;
  p.kind = DegradeProtocol::Kind::vr;
  p.vr_lo = 8;
  p.vr_hi = 32;
  p.seed = 101;
  Manifest deg = apply_protocol(synth.train, p, out.path());
  ASSERT_EQ(deg.entries.size(), synth.train.entries.size());
  for (const auto& e : deg.entries) {
    ImageSize sz = probe_image_size(deg.resolve(e.input_path).string());
    EXPECT_GE(sz.width, 8);
    EXPECT_LT(sz.width, 32);
    EXPECT_DOUBLE_EQ(e.resolution, resolution_of(sz.width, deg.width_max));
  }
}

TEST(Protocol, MlrRatioOneIsNoOp) {
  TempDir corpus("proto_src"), out("proto_out");
  auto synth = make_corpus(corpus.path());
  DegradeProtocol p;
  p.kind = DegradeProtocol::Kind::mlr;
  p.mlr_ratios = {1.0};
  p.seed = 5;
  Manifest deg = apply_protocol(synth.query, p, out.path());
  ASSERT_EQ(deg.entries.size(), synth.query.entries.size());
  for (std::size_t i = 0; i < deg.entries.size(); ++i) {
    const auto& a = synth.query.entries[i];
    const auto& b = deg.entries[i];
    EXPECT_EQ(fs::weakly_canonical(synth.query.resolve(a.input_path)),
              fs::weakly_canonical(deg.resolve(b.input_path)));
    EXPECT_EQ(a.person_id, b.person_id);
    EXPECT_DOUBLE_EQ(a.resolution, b.resolution);
  }
  // nothing was rewritten
  EXPECT_TRUE(fs::is_empty(out / "images"));
}

TEST(Protocol, MlrDrawsOnlyFromTheRatioSet) {
  TempDir corpus("proto_src"), out("proto_out");
  auto synth = make_corpus(corpus.path(), 4, 8);
  DegradeProtocol p;
  p.kind = DegradeProtocol::Kind::mlr;
  p.mlr_ratios = {0.5, 0.25};
  p.seed = 7;
  Manifest deg = apply_protocol(synth.train, p, out.path());
  for (const auto& e : deg.entries) {
    ImageSize sz = probe_image_size(deg.resolve(e.input_path).string());
    EXPECT_TRUE(sz.width == 16 || sz.width == 8) << sz.width;
  }
}

TEST(Protocol, SameSeedGivesByteIdenticalOutput) {
  TempDir corpus("proto_src"), out1("proto_o1"), out2("proto_o2");
  auto synth = make_corpus(corpus.path());
  DegradeProtocol p;
  p.kind = DegradeProtocol::Kind::vr;
  p.seed = 404;
  Manifest d1 = apply_protocol(synth.train, p, out1.path());
  Manifest d2 = apply_protocol(synth.train, p, out2.path());
  save_manifest(d1, out1 / "train.csv");
  save_manifest(d2, out2 / "train.csv");
  EXPECT_EQ(rivid::test::read_bytes(out1 / "train.csv"),
            rivid::test::read_bytes(out2 / "train.csv"));
  for (std::size_t i = 0; i < d1.entries.size(); ++i)
    EXPECT_EQ(rivid::test::read_bytes(out1.path() / d1.entries[i].input_path),
              rivid::test::read_bytes(out2.path() / d2.entries[i].input_path));
}

TEST(Protocol, PreservesIdentityAndSplit) {
  TempDir corpus("proto_src"), out("proto_out");
  auto synth = make_corpus(corpus.path());
  DegradeProtocol p;
  p.seed = 3;
  Manifest deg = apply_protocol(synth.gallery, p, out.path());
  EXPECT_EQ(deg.split, Split::gallery);
  for (std::size_t i = 0; i < deg.entries.size(); ++i)
    EXPECT_EQ(deg.entries[i].person_id, synth.gallery.entries[i].person_id);
}

TEST(Protocol, DegradedManifestRoundTripsThroughLoader) {
  TempDir corpus("proto_src"), out("proto_out");
  auto synth = make_corpus(corpus.path());
  DegradeProtocol p;
  p.seed = 12;
  Manifest deg = apply_protocol(synth.train, p, out.path());
  save_manifest(deg, out / "train.csv");
  Manifest back = load_manifest(out / "train.csv");  // validation re-runs here
  EXPECT_EQ(back.entries.size(), deg.entries.size());
}

TEST(Protocol, Validation) {
  DegradeProtocol p;
  p.kind = DegradeProtocol::Kind::vr;
  p.vr_lo = 2;
  p.vr_hi = 8;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p.vr_lo = 8;
  p.vr_hi = 8;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  DegradeProtocol m;
  m.kind = DegradeProtocol::Kind::mlr;
  m.mlr_ratios = {0.5, 1.5};
  EXPECT_THROW(m.validate(), std::invalid_argument);
  m.mlr_ratios.clear();
  EXPECT_THROW(m.validate(), std::invalid_argument);

  TempDir out("proto_out");
  Manifest empty;
  empty.width_max = 64;
  DegradeProtocol ok;
  EXPECT_THROW(apply_protocol(empty, ok, out.path()), std::runtime_error);
}
