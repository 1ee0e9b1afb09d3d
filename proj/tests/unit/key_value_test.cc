#include "blockmodel/key_value.h"

#include <gtest/gtest.h>

#include <sstream>

#include "blockmodel/edge_list_io.h"

namespace blockmodel {
namespace {

KeyValues parse(const std::string& text) {
  std::istringstream in(text);
  return parse_key_values(in, "test.cfg");
}

TEST(KeyValueTest, ParsesValuesAndComments) {
  const KeyValues kv = parse("# comment\nn = 100  # trailing\n\ndirected=true\nlambda = 0.25\n");
  EXPECT_EQ(kv.get_int("n"), 100);
  EXPECT_EQ(kv.get_bool("directed"), true);
  EXPECT_EQ(kv.get_double("lambda"), 0.25);
  EXPECT_FALSE(kv.get_string("missing"));
  EXPECT_NO_THROW(kv.reject_unused());
}

TEST(KeyValueTest, ReportsBadInput) {
  EXPECT_THROW(parse("just a line\n"), ParseError);
  EXPECT_THROW(parse("a = 1\na = 2\n"), ParseError);
  EXPECT_THROW(parse(" = 1\n"), ParseError);
  const KeyValues kv = parse("x = abc\ny = 1.5\nz = maybe\n");
  EXPECT_THROW(kv.get_double("x"), std::invalid_argument);
  EXPECT_THROW(kv.get_int("y"), std::invalid_argument);
  EXPECT_THROW(kv.get_bool("z"), std::invalid_argument);
}

TEST(KeyValueTest, UnusedKeysAreRejected) {
  const KeyValues kv = parse("n = 10\nlamda = 0.5\n");
  synth_spec_from(kv);
  try {
    kv.reject_unused();
    FAIL() << "expected unknown key";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("lamda"), std::string::npos);
  }
}

TEST(KeyValueTest, SynthSpecDefaultsAndOverrides) {
  EXPECT_EQ(synth_spec_from(parse("")), SynthSpec{});
  const SynthSpec spec = synth_spec_from(parse(
      "n = 600\ndirected = true\nlambda = 0.6\n"
      "block.0.fraction = 0.4\nblock.0.family = powerlaw\nblock.0.alpha = 2.1\nblock.0.theta_min = 2\n"
      "block.1.fraction = 0.6\nblock.1.family = poisson\nblock.1.mean = 7\n"));
  EXPECT_EQ(spec.n, 600);
  EXPECT_TRUE(spec.directed);
  EXPECT_EQ(spec.fractions, (std::vector<double>{0.4, 0.6}));
  EXPECT_EQ(spec.blocks[0].alpha, 2.1);
  EXPECT_EQ(spec.blocks[0].theta_min, 2.0);
  EXPECT_EQ(spec.blocks[1].family, PriorFamily::kPoisson);
  EXPECT_EQ(spec.blocks[1].mean, 7.0);
  EXPECT_EQ(spec.blocks[1].poisson_theta, PoissonTheta::kConstant);
  EXPECT_EQ(synth_spec_from(parse("block.0.family = poisson\nblock.0.theta = poisson\nblock.1.family = poisson\n"))
                .blocks[0].poisson_theta,
            PoissonTheta::kDrawn);
  EXPECT_THROW(synth_spec_from(parse("block.1.theta = gamma\n")), std::invalid_argument);
  EXPECT_TRUE(synth_spec_from(parse("directed = true\ndirected_theta = shared\n")).shared_theta);
  EXPECT_THROW(synth_spec_from(parse("directed_theta = shared\n")), std::invalid_argument);
  EXPECT_THROW(synth_spec_from(parse("directed = true\ndirected_theta = both\n")), std::invalid_argument);
  EXPECT_THROW(synth_spec_from(parse("lambda = 2\n")), std::invalid_argument);
  EXPECT_THROW(synth_spec_from(parse("block.0.family = gaussian\n")), std::invalid_argument);
  EXPECT_THROW(synth_spec_from(parse("block.x.alpha = 2\n")), std::invalid_argument);
}

TEST(KeyValueTest, SpecEchoRoundTrips) {
  SynthSpec spec;
  spec.n = 123;
  spec.directed = true;
  spec.lambda = 0.1;
  spec.omega12 = 3.5;
  spec.blocks[0].theta_min = 0.75;
  spec.blocks[1].poisson_theta = PoissonTheta::kDrawn;
  spec.shared_theta = true;
  EXPECT_EQ(synth_spec_from(parse(to_key_values(spec))), spec);
  EXPECT_EQ(synth_spec_from(parse(to_key_values(SynthSpec{}))), SynthSpec{});
}

TEST(KeyValueTest, DegreePriors) {
  EXPECT_FALSE(degree_priors_from(parse("n = 5\n"), "prior."));
  const KeyValues kv = parse(
      "prior.block.0.family = powerlaw\nprior.block.0.alpha = 1.7\n"
      "prior.block.1.family = poisson\nprior.in.block.1.mean = 4\n");
  const auto set = degree_priors_from(kv, "prior.");
  ASSERT_TRUE(set);
  ASSERT_EQ(set->total.size(), 2u);
  EXPECT_EQ(set->total[0].alpha, 1.7);
  EXPECT_EQ(set->out[1].family, PriorFamily::kPoisson);
  EXPECT_FALSE(set->out[1].mean);
  EXPECT_EQ(set->in[1].family, PriorFamily::kPoisson);
  EXPECT_EQ(set->in[1].mean, 4.0);
  EXPECT_EQ(set->in[0], set->out[0]);
  EXPECT_THROW(degree_priors_from(parse("prior.block.0.alpha = 0.5\n"), "prior."), std::invalid_argument);
  EXPECT_THROW(degree_priors_from(parse("prior.block.0.beta = 1.5\n"), "prior."), std::invalid_argument);
}

}  // namespace
}  // namespace blockmodel
