#include <gtest/gtest.h>

#include <set>

#include "rivid/data/synth.hpp"
#include "test_utils.hpp"

using namespace rivid;
using rivid::test::TempDir;

namespace {

SynthSpec small_spec(std::uint64_t seed) {
  SynthSpec s;
  s.n_identities = 4;
  s.images_per_identity = 3;
  s.canvas_height = 64;
  s.canvas_width = 32;
  s.seed = seed;
  return s;
}

}  // namespace

TEST(Synth, DeterministicPixelOutput) {
  TempDir a("synth_a"), b("synth_b");
  SynthSpec s = small_spec(77);
  s.n_identities = 2;
  s.images_per_identity = 1;
  synth_corpus(s, a.path());
  synth_corpus(s, b.path());
  for (const auto& rel : {"images/id000_im000.png", "images/id001_im000.png",
                          "masks/id000_im000.png", "train.csv", "gallery.csv"}) {
    EXPECT_EQ(rivid::test::read_bytes(a / rel), rivid::test::read_bytes(b / rel)) << rel;
  }
}

TEST(Synth, SameIdentitySharesAttributesButNotNuisance) {
  SynthSpec s = small_spec(5);
  auto ids = synth_detail::make_identities(s);
  // two renders of the same identity differ only through nuisance draws
  auto im0 = synth_detail::render_image(s, ids[0], 0, 0);
  auto im1 = synth_detail::render_image(s, ids[0], 0, 1);
  EXPECT_NE(im0.img.data, im1.img.data);
  auto again = synth_detail::render_image(s, ids[0], 0, 0);
  EXPECT_EQ(im0.img.data, again.img.data);
}

TEST(Synth, CountsAndDisjointSplits) {
  TempDir tmp("synth");
  SynthSpec s;
  s.n_identities = 32;
  s.images_per_identity = 20;
  s.seed = 9;
  SynthOutput out = synth_corpus(s, tmp.path());
  EXPECT_EQ(out.train.entries.size() + out.query.entries.size() + out.gallery.entries.size(),
            640u);
  auto train_ids = out.train.identities();
  std::set<std::int64_t> train_set(train_ids.begin(), train_ids.end());
  EXPECT_EQ(train_set.size(), 16u);
  std::set<std::int64_t> test_set;
  for (const auto& e : out.query.entries) {
    EXPECT_EQ(train_set.count(e.person_id), 0u);
    test_set.insert(e.person_id);
  }
  for (const auto& e : out.gallery.entries) {
    EXPECT_EQ(train_set.count(e.person_id), 0u);
    test_set.insert(e.person_id);
  }
  EXPECT_EQ(test_set.size(), 16u);
  // every query identity has gallery entries
  std::set<std::int64_t> gal_ids;
  for (const auto& e : out.gallery.entries) gal_ids.insert(e.person_id);
  for (const auto& e : out.query.entries) EXPECT_EQ(gal_ids.count(e.person_id), 1u);
}

TEST(Synth, IdentitiesDifferInFineAndCoarseAttributes) {
  SynthSpec s;
  s.n_identities = 32;
  s.seed = 3;
  auto ids = synth_detail::make_identities(s);
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      const auto& a = ids[i];
      const auto& b = ids[j];
      const bool fine_differ = a.stripe_orient != b.stripe_orient ||
                               a.stripe_count != b.stripe_count ||
                               a.stripe_thickness != b.stripe_thickness ||
                               a.band_index != b.band_index;
      const double coarse_sep = std::max(synth_detail::linf(a.torso_color, b.torso_color),
                                         synth_detail::linf(a.pant_color, b.pant_color));
      EXPECT_TRUE(fine_differ) << i << " vs " << j;
      EXPECT_GE(coarse_sep, s.color_min_sep) << i << " vs " << j;
    }
}

TEST(Synth, ManifestsValidateAndCarryMasks) {
  TempDir tmp("synth");
  SynthSpec s = small_spec(21);
  synth_corpus(s, tmp.path());
  Manifest train = load_manifest(tmp / "train.csv");
  ASSERT_FALSE(train.entries.empty());
  EXPECT_EQ(train.width_max, 32);
  for (const auto& e : train.entries) {
    EXPECT_DOUBLE_EQ(e.resolution, 1.0);
    EXPECT_FALSE(e.mask_path.empty());
    EXPECT_TRUE(fs::exists(train.resolve(e.mask_path)));
  }
}

TEST(Synth, RejectsDegenerateSpecs) {
  TempDir tmp("synth");
  SynthSpec s = small_spec(1);
  s.n_identities = 1;
  EXPECT_THROW(synth_corpus(s, tmp.path()), std::invalid_argument);
  s = small_spec(1);
  s.canvas_height = 16;
  s.canvas_width = 8;
  EXPECT_THROW(synth_corpus(s, tmp.path()), std::runtime_error);
  s = small_spec(1);
  s.n_identities = 500;  // more than the distinct fine-attribute space
  EXPECT_THROW(synth_corpus(s, tmp.path()), std::runtime_error);
}

TEST(Synth, SpecFromConfigRejectsUnknownKeys) {
  auto cfg = KvConfig::parse("n_identities = 8\nimages_per_identity = 2\nseed = 4\n");
  SynthSpec s = SynthSpec::from_config(cfg);
  EXPECT_EQ(s.n_identities, 8);
  EXPECT_EQ(s.seed, 4u);
  auto bad = KvConfig::parse("n_identities = 8\ntypo_key = 2\n");
  EXPECT_THROW(SynthSpec::from_config(bad), std::runtime_error);
}
