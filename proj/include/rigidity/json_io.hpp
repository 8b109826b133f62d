#pragma once

// JSON encodings of subspaces, frames, tableaux and semilinear maps.
// Complex entries are [re, im] pairs; matrices are row-major.

#include <string>
#include <vector>

#include <json.hpp>

#include "rigidity/semilinear.hpp"

namespace rigidity::io {

using Json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

inline Json encode_matrix(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMatrix decode_matrix(const Json& rows, Index expected_rows) {
  if (!rows.is_array() || static_cast<Index>(rows.size()) != expected_rows) {
    fail("matrix must be an array of " + std::to_string(expected_rows) + " rows");
  }
  const Index cols = expected_rows == 0 ? 0 : static_cast<Index>(rows.at(0).size());
  CMatrix m(expected_rows, cols);
  for (Index i = 0; i < expected_rows; ++i) {
    const Json& row = rows.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) fail("ragged matrix row");
    for (Index j = 0; j < cols; ++j) {
      const Json& e = row.at(static_cast<std::size_t>(j));
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        fail("matrix entries must be [re, im] pairs");
      }
      m(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

inline Field decode_field(const Json& j) {
  const auto s = j.get<std::string>();
  if (s == "real") return Field::Real;
  if (s == "complex") return Field::Complex;
  fail("field must be \"real\" or \"complex\"");
}

}  // namespace detail

inline Json to_json(const Subspace& s) {
  Json j;
  j["ambient"] = s.ambient();
  j["field"] = to_string(s.field());
  j["basis"] = detail::encode_matrix(s.basis());
  return j;
}

/// Re-orthonormalizes the basis; rejects a rank different from the number
/// of declared basis columns.
inline Subspace subspace_from_json(const Json& j, double tol = kDefaultTol) {
  try {
    const auto n = j.at("ambient").get<Index>();
    const Field field = detail::decode_field(j.at("field"));
    CMatrix m = detail::decode_matrix(j.at("basis"), n);
    const Index declared = m.cols();
    Matrix cols = [&] {
      try {
        return Matrix(std::move(m), field);
      } catch (const Error&) {
        detail::fail("real subspace with complex basis entries");
      }
    }();
    Subspace s = Subspace::span(cols, tol);
    if (s.dim() != declared) {
      detail::fail("basis rank " + std::to_string(s.dim()) + " differs from declared dim " +
                   std::to_string(declared));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    detail::fail(e.what());
  }
}

inline Json to_json(const FrameTuple& t) {
  Json j;
  j["ambient"] = t.ambient();
  j["shape"] = t.shape().parts();
  j["orthogonal"] = t.orthogonal();
  Json comps = Json::array();
  for (const auto& c : t.components()) comps.push_back(to_json(c));
  j["components"] = std::move(comps);
  return j;
}

inline FrameTuple frame_from_json(const Json& j, double tol = kDefaultTol) {
  try {
    const auto n = j.at("ambient").get<Index>();
    const auto shape = IntPartition(j.at("shape").get<std::vector<int>>());
    std::vector<Subspace> comps;
    for (const auto& c : j.at("components")) comps.push_back(subspace_from_json(c, tol));
    FrameTuple t(std::move(comps), j.at("orthogonal").get<bool>());
    if (t.ambient() != n) detail::fail("component ambient differs from frame ambient");
    if (!(t.shape() == shape)) detail::fail("component dims do not match the declared shape");
    return t;
  } catch (const nlohmann::json::exception& e) {
    detail::fail(e.what());
  }
}

inline Json to_json(const Tableau& t) {
  Json j;
  j["n"] = t.n();
  j["blocks"] = t.blocks();
  return j;
}

inline Tableau tableau_from_json(const Json& j) {
  try {
    return Tableau(j.at("n").get<int>(), j.at("blocks").get<std::vector<Block>>());
  } catch (const nlohmann::json::exception& e) {
    detail::fail(e.what());
  } catch (const Error& e) {
    detail::fail(e.what());
  }
}

inline Json to_json(const SemilinearMap& t) {
  Json j;
  j["automorphism"] = to_string(t.automorphism());
  j["matrix"] = detail::encode_matrix(t.matrix());
  return j;
}

/// An optional "field" key pins the field; otherwise the map is real when
/// the automorphism is "id" and every entry is real.
inline SemilinearMap semilinear_from_json(const Json& j, double tol = kDefaultTol) {
  try {
    const auto aut_s = j.at("automorphism").get<std::string>();
    Automorphism aut;
    if (aut_s == "id") {
      aut = Automorphism::Identity;
    } else if (aut_s == "conj") {
      aut = Automorphism::Conjugation;
    } else {
      detail::fail("automorphism must be \"id\" or \"conj\"");
    }
    const Json& rows = j.at("matrix");
    CMatrix m = detail::decode_matrix(rows, static_cast<Index>(rows.size()));
    Field field;
    if (j.contains("field")) {
      field = detail::decode_field(j.at("field"));
    } else {
      const bool real = aut == Automorphism::Identity &&
                        (m.size() == 0 || m.imag().cwiseAbs().maxCoeff() == 0.0);
      field = real ? Field::Real : Field::Complex;
    }
    return SemilinearMap(Matrix(std::move(m), field), aut, tol);
  } catch (const nlohmann::json::exception& e) {
    detail::fail(e.what());
  }
}

}  // namespace rigidity::io
