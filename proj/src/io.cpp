#include "qcuntz/io.hpp"

#include "qcuntz/error.hpp"

namespace qcuntz::io {

Json to_json(const SparseMatrix& m) {
  Json entries = Json::array();
  for (std::size_t c = 0; c < m.cols(); ++c) {
    for (const Entry& e : m.column(c)) {
      entries.push_back(Json::array({e.row, c, e.value.real(), e.value.imag()}));
    }
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

SparseMatrix matrix_from_json(const Json& j) {
  try {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    std::vector<std::vector<Entry>> columns(cols);
    for (const Json& e : j.at("entries")) {
      if (!e.is_array() || e.size() != 4) throw Error(ErrorCode::Parse, "entry must be [i, j, re, im]");
      const auto r = e[0].get<std::size_t>();
      const auto c = e[1].get<std::size_t>();
      if (r >= rows || c >= cols) throw Error(ErrorCode::Parse, "entry index out of range");
      const Complex v{e[2].get<double>(), e[3].get<double>()};
      if (v != Complex{}) columns[c].push_back({r, v});
    }
    for (auto& col : columns) {
      std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.row < b.row; });
      for (std::size_t i = 1; i < col.size(); ++i) {
        if (col[i].row == col[i - 1].row) throw Error(ErrorCode::Parse, "duplicate matrix entry");
      }
    }
    return SparseMatrix::from_columns(rows, std::move(columns));
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::Parse, std::string("malformed matrix: ") + ex.what());
  }
}

Json to_json(const RepSpec& spec) {
  Json j{{"family", family_name(spec.family)}, {"q", spec.q}, {"n", spec.n}};
  if (spec.family == Family::UnboundedXJ || spec.family == Family::BoundedPhiJ) j["j"] = spec.j;
  if (spec.has_levels()) j["x"] = spec.x;
  if (spec.family == Family::Circle || spec.family == Family::BoundedPhiJ) j["phi"] = spec.phi;
  return j;
}

Json to_json(const TruncationParams& t) {
  return Json{{"L", t.L}, {"s_min", t.s_min}, {"s_max", t.s_max}};
}

Json to_json(const Basis& basis) {
  Json labels = Json::array(), depth = Json::array();
  for (std::size_t v = 0; v < basis.size(); ++v) {
    labels.push_back(to_string(basis.label(v)));
    depth.push_back(basis.depth(v));
  }
  return Json{{"size", basis.size()}, {"labels", std::move(labels)}, {"depth", std::move(depth)}};
}

Json family_document(const OperatorFamily& family) {
  Json gens = Json::array();
  for (int k = 1; k <= family.n(); ++k) gens.push_back(to_json(family.A(k)));
  return Json{{"schema_version", kSchemaVersion},
              {"spec", to_json(family.spec())},
              {"truncation", to_json(family.truncation())},
              {"q", family.q()},
              {"n", family.n()},
              {"basis", to_json(family.basis())},
              {"interior", family.basis().interior(1)},
              {"generators", std::move(gens)}};
}

analysis::MatrixSystem system_from_json(const Json& doc) {
  try {
    if (doc.contains("schema_version") && doc.at("schema_version") != kSchemaVersion) {
      throw Error(ErrorCode::Parse, "unsupported schema_version");
    }
    analysis::MatrixSystem s;
    s.q = doc.at("q").get<double>();
    if (doc.contains("generators")) {
      for (const Json& g : doc.at("generators")) s.A.push_back(matrix_from_json(g));
    } else {
      s.A.push_back(matrix_from_json(doc.at("matrix")));
    }
    if (s.A.empty()) throw Error(ErrorCode::Parse, "no generator matrices");
    s.n = static_cast<int>(s.A.size());
    const std::size_t dim = s.A.front().rows();
    for (const SparseMatrix& a : s.A) {
      if (a.rows() != dim || a.cols() != dim) throw Error(ErrorCode::Parse, "generators must be square and equal-sized");
    }
    s.interior = doc.at("interior").get<std::vector<std::size_t>>();
    for (std::size_t v : s.interior) {
      if (v >= dim) throw Error(ErrorCode::Parse, "interior ordinal out of range");
    }
    return s;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::Parse, std::string("malformed matrix file: ") + ex.what());
  }
}

Json to_json(const analysis::ResidualReport& r) {
  Json j{{"check", r.check},
         {"tolerance", r.tolerance},
         {"max_residual", r.max_residual},
         {"vectors_checked", r.vectors_checked},
         {"pass", r.pass()},
         {"status", analysis::to_string(r.status)}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const analysis::WoldDecomposition& w) {
  Json fock = Json::array();
  for (const auto& b : w.fock_blocks) {
    Json vac = Json::array();
    for (const auto& [i, z] : b.vacuum) vac.push_back(Json::array({i, z.real(), z.imag()}));
    fock.push_back(Json{{"vacuum", std::move(vac)},
                        {"chain_length", b.chain_length},
                        {"boundary", b.boundary},
                        {"labels", b.labels}});
  }
  Json unbounded = Json::array();
  for (const auto& b : w.unbounded_blocks) {
    unbounded.push_back(Json{{"labels", b.labels},
                             {"x", b.x},
                             {"shift", b.shift},
                             {"reference_eigenvalue", b.reference},
                             {"eigenvalues", b.eigenvalues}});
  }
  return Json{{"q", w.q},
              {"x0", w.x0},
              {"fock_blocks", std::move(fock)},
              {"unitary_block", Json{{"present", w.unitary_block.present},
                                     {"labels", w.unitary_block.labels}}},
              {"unbounded_blocks", std::move(unbounded)},
              {"relation_residual", w.relation_residual},
              {"leakage", w.leakage}};
}

Json to_json(const analysis::CommutantReport& r) {
  return Json{{"check", "commutant_dimension"},
              {"heuristic", true},
              {"dimension", r.dimension},
              {"status", analysis::to_string(r.status)},
              {"method", r.method},
              {"basis_size", r.basis_size},
              {"interior_count", r.interior_count}};
}

Json to_json(const classify::NormalizedParam& p) {
  return Json{{"x", p.x}, {"shift", p.shift}, {"input", p.input}, {"text", classify::describe(p)}};
}

Json to_json(const classify::EquivalenceDecision& d) {
  Json cert{{"kind", d.certificate.kind}};
  if (d.certificate.j) cert["j"] = *d.certificate.j;
  if (d.certificate.x) cert["x"] = *d.certificate.x;
  if (d.certificate.phi) cert["phi"] = *d.certificate.phi;
  cert["detail"] = d.certificate.detail;
  return Json{{"equivalent", d.equivalent}, {"certificate", std::move(cert)}};
}

}  // namespace qcuntz::io
