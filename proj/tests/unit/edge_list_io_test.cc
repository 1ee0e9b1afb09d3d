#include "blockmodel/edge_list_io.h"

#include <gtest/gtest.h>

#include <sstream>

namespace blockmodel {
namespace {

TEST(EdgeListIoTest, ReadsLabelsCountsAndComments) {
  std::istringstream in("# header\nalpha\tbeta\n\nbeta\tgamma\t3\nalpha\tbeta\n");
  const LabeledGraph lg = read_edge_list(in, true);
  EXPECT_EQ(lg.labels, (std::vector<std::string>{"alpha", "beta", "gamma"}));
  EXPECT_EQ(lg.graph.multiplicity(0, 1), 2);
  EXPECT_EQ(lg.graph.multiplicity(1, 2), 3);
  EXPECT_EQ(lg.graph.num_edges(), 5);
}

TEST(EdgeListIoTest, MalformedLineReportsLineNumber) {
  std::istringstream in("a\tb\nc\n");
  try {
    read_edge_list(in, true, "edges.tsv");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("edges.tsv:2"), std::string::npos);
  }
  std::istringstream bad_count("a\tb\t0\n");
  EXPECT_THROW(read_edge_list(bad_count, true), ParseError);
  std::istringstream not_number("a\tb\tx\n");
  EXPECT_THROW(read_edge_list(not_number, true), ParseError);
}

TEST(EdgeListIoTest, SelfLoopIsRejected) {
  std::istringstream in("a\tb\nb\tb\n");
  try {
    read_edge_list(in, true, "f");
    FAIL() << "expected a rejected edge";
  } catch (const RejectedEdgeError& e) {
    EXPECT_NE(std::string(e.what()).find("f:2"), std::string::npos);
  }
}

TEST(EdgeListIoTest, WriteThenReadRoundTrips) {
  std::istringstream in("x\ty\t2\ny\tz\nz\tx\n");
  const LabeledGraph lg = read_edge_list(in, true);
  std::ostringstream out;
  write_edge_list(out, lg.graph, &lg.labels);
  EXPECT_EQ(out.str(), "x\ty\t2\ny\tz\nz\tx\n");
  std::istringstream again(out.str());
  EXPECT_EQ(read_edge_list(again, true).graph.edges().size(), 3u);
}

TEST(EdgeListIoTest, LabelMapRoundTrip) {
  const std::vector<std::string> labels{"red", "green", "blue"};
  std::ostringstream out;
  write_label_map(out, labels);
  std::istringstream in(out.str());
  EXPECT_EQ(read_label_map(in), labels);
  std::istringstream gap("a\t0\nb\t2\n");
  EXPECT_THROW(read_label_map(gap), ParseError);
}

TEST(EdgeListIoTest, PartitionAlignment) {
  std::istringstream in("b\t1\na\t0\nc\t1\n");
  const auto entries = read_partition(in);
  const Partition p = align_partition(entries, {"a", "b", "c"}, 2);
  EXPECT_EQ(std::vector<BlockId>(p.labels().begin(), p.labels().end()), (std::vector<BlockId>{0, 1, 1}));
  EXPECT_THROW(align_partition(entries, {"a", "b", "d"}, 2), std::invalid_argument);
  EXPECT_THROW(align_partition(entries, {"a", "b"}, 2), std::invalid_argument);
  std::istringstream dup("a\t0\na\t1\n");
  EXPECT_THROW(align_partition(read_partition(dup), {"a"}, 1), std::invalid_argument);
  std::istringstream negative("a\t-1\n");
  EXPECT_THROW(read_partition(negative), ParseError);
}

}  // namespace
}  // namespace blockmodel
