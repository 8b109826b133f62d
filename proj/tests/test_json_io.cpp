#include <gtest/gtest.h>

#include "rigidity/rigidity.hpp"

namespace {

using namespace rigidity;
using io::Json;

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& err) {
    return err.kind();
  }
  return ErrorKind::InternalInconsistency;
}

TEST(SubspaceJson, RoundTrip) {
  Rng rng(1);
  for (const Field f : {Field::Real, Field::Complex}) {
    const Subspace a = random_subspace(4, 2, f, rng);
    const Json j = io::to_json(a);
    EXPECT_EQ(j["ambient"], 4);
    EXPECT_EQ(j["field"], to_string(f));
    EXPECT_EQ(j["basis"].size(), 4u);
    EXPECT_EQ(j["basis"][0].size(), 2u);
    const Subspace b = io::subspace_from_json(Json::parse(j.dump()));
    EXPECT_EQ(b.field(), f);
    EXPECT_TRUE(equals(a, b, 1e-12));
  }
}

TEST(SubspaceJson, KeyOrderAndEntryEncoding) {
  const Subspace a = Subspace::coordinate_line(2, 1, Field::Complex);
  EXPECT_EQ(io::to_json(a).dump(), R"({"ambient":2,"field":"complex","basis":[[[0.0,0.0]],[[1.0,0.0]]]})");
}

TEST(SubspaceJson, ReorthonormalizesAndChecksRank) {
  const Json ok = Json::parse(R"({"ambient":2,"field":"real","basis":[[[2,0]],[[2,0]]]})");
  EXPECT_TRUE(equals(io::subspace_from_json(ok), Subspace::span(Matrix::from_rows({{1}, {1}}, Field::Real))));
  const Json deficient = Json::parse(R"({"ambient":2,"field":"real","basis":[[[1,0],[2,0]],[[1,0],[2,0]]]})");
  EXPECT_EQ(kind_of([&] { io::subspace_from_json(deficient); }), ErrorKind::ParseError);
  const Json imag = Json::parse(R"({"ambient":1,"field":"real","basis":[[[1,1]]]})");
  EXPECT_EQ(kind_of([&] { io::subspace_from_json(imag); }), ErrorKind::ParseError);
  const Json missing = Json::parse(R"({"ambient":1,"basis":[[[1,0]]]})");
  EXPECT_EQ(kind_of([&] { io::subspace_from_json(missing); }), ErrorKind::ParseError);
  const Json ragged = Json::parse(R"({"ambient":2,"field":"real","basis":[[[1,0]],[]]})");
  EXPECT_EQ(kind_of([&] { io::subspace_from_json(ragged); }), ErrorKind::ParseError);
}

TEST(FrameJson, RoundTrip) {
  Rng rng(2);
  const FrameTuple t = random_frame(4, IntPartition({2, 1, 1}), true, Field::Complex, rng);
  const Json j = io::to_json(t);
  EXPECT_EQ(j["shape"], Json::array({2, 1, 1}));
  EXPECT_EQ(j["orthogonal"], true);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"ambient", "shape", "orthogonal", "components"}));
  const FrameTuple u = io::frame_from_json(Json::parse(j.dump()));
  EXPECT_LE(frame_distance(t, u), 1e-12);
  EXPECT_TRUE(u.orthogonal());
}

TEST(FrameJson, ShapeMustMatchComponents) {
  Rng rng(3);
  Json j = io::to_json(random_frame(3, IntPartition({1, 1, 1}), false, Field::Real, rng));
  j["shape"] = Json::array({2, 1});
  EXPECT_EQ(kind_of([&] { io::frame_from_json(j); }), ErrorKind::ParseError);
}

TEST(TableauJson, RoundTripAndValidation) {
  const Tableau t(6, {{1, 2}, {3, 4}, {5}, {6}});
  EXPECT_EQ(io::to_json(t).dump(), R"({"n":6,"blocks":[[1,2],[3,4],[5],[6]]})");
  EXPECT_EQ(io::tableau_from_json(Json::parse(R"({"n":3,"blocks":[[3],[2,1]]})")), Tableau(3, {{1, 2}, {3}}));
  EXPECT_EQ(kind_of([] { io::tableau_from_json(Json::parse(R"({"n":3,"blocks":[[1,2]]})")); }),
            ErrorKind::ParseError);
}

TEST(SemilinearJson, RoundTripAndFieldInference) {
  Rng rng(4);
  const SemilinearMap c(detail::random_invertible(3, Field::Complex, rng), Automorphism::Conjugation);
  const Json j = io::to_json(c);
  EXPECT_EQ(j["automorphism"], "conj");
  const SemilinearMap back = io::semilinear_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back.automorphism(), Automorphism::Conjugation);
  EXPECT_EQ(back.field(), Field::Complex);
  EXPECT_EQ((back.matrix().entries() - c.matrix().entries()).norm(), 0.0);

  const Json real = Json::parse(R"({"automorphism":"id","matrix":[[[2,0],[0,0]],[[0,0],[1,0]]]})");
  EXPECT_EQ(io::semilinear_from_json(real).field(), Field::Real);
  Json pinned = real;
  pinned["field"] = "complex";
  EXPECT_EQ(io::semilinear_from_json(pinned).field(), Field::Complex);

  const Json bad = Json::parse(R"({"automorphism":"frobenius","matrix":[[[1,0]]]})");
  EXPECT_EQ(kind_of([&] { io::semilinear_from_json(bad); }), ErrorKind::ParseError);
  const Json singular = Json::parse(R"({"automorphism":"id","matrix":[[[1,0],[1,0]],[[1,0],[1,0]]]})");
  EXPECT_EQ(kind_of([&] { io::semilinear_from_json(singular); }), ErrorKind::Singular);
}

}  // namespace
