#include "trisys/json_io.hpp"

#include <json.hpp>

namespace trisys {

using nlohmann::json;

std::string export_json(const GradedAlgebra& g) {
  json out;
  out["format"] = "gsc-1";
  out["p"] = g.p();
  out["dim_even"] = g.dim_even();
  out["dim_odd"] = g.dim_odd();
  out["kind"] = g.kind() == AlgKind::Lie ? "lie" : "superlie";
  out["labels"] = g.labels();
  json brackets = json::array();
  int n = g.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const SparseVec& sv = g.stored(i, j);
      if (sv.empty()) continue;
      json v = json::array();
      for (auto& [k, c] : sv.terms) v.push_back({k, c});
      brackets.push_back({{"i", i}, {"j", j}, {"v", v}});
    }
  out["brackets"] = std::move(brackets);
  out["provenance"] = g.provenance();
  return out.dump(1);
}

std::string export_json(const TripleSystem& t) {
  json out;
  out["format"] = "tsc-1";
  out["p"] = t.p();
  out["dim"] = t.dim();
  out["kind"] = ts_kind_name(t.kind());
  out["labels"] = t.labels();
  if (t.form()) {
    json gram = json::array();
    for (int i = 0; i < t.dim(); ++i)
      for (int j = 0; j < t.dim(); ++j) gram.push_back(t.form()->gram.at(i, j));
    out["form"] = std::move(gram);
  }
  json triples = json::array();
  for (size_t idx = 0; idx < t.pair_count(); ++idx) {
    const Matrix& m = t.stored()[idx];
    if (m.is_zero()) continue;
    auto [i, j] = t.pair_at(idx);
    json flat = json::array();
    for (int32_t v : m.flatten()) flat.push_back(v);
    triples.push_back({{"i", i}, {"j", j}, {"m", flat}});
  }
  out["triples"] = std::move(triples);
  if (!t.key().empty()) out["key"] = t.key();
  return out.dump(1);
}

namespace {

json parse_or_throw(const std::string& bytes) {
  json doc = json::parse(bytes, nullptr, false);
  if (doc.is_discarded())
    throw ImportError(ImportError::Code::Parse, "import_json: malformed JSON");
  return doc;
}

template <typename T>
T field(const json& doc, const char* name) {
  if (!doc.contains(name))
    throw ImportError(ImportError::Code::Validation,
                      std::string("import_json: missing field '") + name + "'");
  try {
    return doc.at(name).get<T>();
  } catch (const json::exception&) {
    throw ImportError(ImportError::Code::Validation,
                      std::string("import_json: bad field '") + name + "'");
  }
}

GradedAlgebra import_algebra(const json& doc) {
  int64_t p = field<int64_t>(doc, "p");
  int n0 = field<int>(doc, "dim_even");
  int n1 = field<int>(doc, "dim_odd");
  std::string kind_s = field<std::string>(doc, "kind");
  if (kind_s != "lie" && kind_s != "superlie")
    throw ImportError(ImportError::Code::Validation, "import_json: bad kind");
  AlgKind kind = kind_s == "lie" ? AlgKind::Lie : AlgKind::SuperLie;
  int n = n0 + n1;
  if (n0 < 0 || n1 < 0)
    throw ImportError(ImportError::Code::Validation, "import_json: negative dims");
  std::vector<SparseVec> tab(static_cast<size_t>(n) * (n + 1) / 2);
  if (!doc.contains("brackets") || !doc["brackets"].is_array())
    throw ImportError(ImportError::Code::Validation, "import_json: missing brackets");
  for (const auto& ent : doc["brackets"]) {
    int i = field<int>(ent, "i"), j = field<int>(ent, "j");
    if (i < 0 || j < i || j >= n)
      throw ImportError(ImportError::Code::Validation, "import_json: bracket index range");
    SparseVec sv;
    for (const auto& term : ent.at("v")) {
      if (!term.is_array() || term.size() != 2)
        throw ImportError(ImportError::Code::Validation, "import_json: bad term");
      int64_t k = term[0].get<int64_t>(), c = term[1].get<int64_t>();
      if (k < 0 || k >= n || c <= 0 || c >= p)
        throw ImportError(ImportError::Code::Validation,
                          "import_json: coefficient/index out of range");
      sv.terms.emplace_back(static_cast<int32_t>(k), static_cast<int32_t>(c));
    }
    tab[GradedAlgebra::pair_index(i, j, n)] = std::move(sv);
  }
  std::vector<std::string> labels;
  if (doc.contains("labels")) labels = doc["labels"].get<std::vector<std::string>>();
  nlohmann::json prov = doc.contains("provenance") ? doc["provenance"] : json::object();
  try {
    return GradedAlgebra(p, n0, n1, kind, std::move(tab), std::move(labels), std::move(prov));
  } catch (const std::invalid_argument& e) {
    throw ImportError(ImportError::Code::Validation, std::string("import_json: ") + e.what());
  }
}

TripleSystem import_triple(const json& doc) {
  int64_t p = field<int64_t>(doc, "p");
  int n = field<int>(doc, "dim");
  std::string kind_s = field<std::string>(doc, "kind");
  TsKind kind;
  if (kind_s == "sts") kind = TsKind::STS;
  else if (kind_s == "ots") kind = TsKind::OTS;
  else if (kind_s == "null_sts") kind = TsKind::NullSTS;
  else if (kind_s == "null_ots") kind = TsKind::NullOTS;
  else throw ImportError(ImportError::Code::Validation, "import_json: bad triple kind");
  bool strict = kind == TsKind::OTS || kind == TsKind::NullOTS;
  size_t pairs = strict ? static_cast<size_t>(n) * (n - 1) / 2 : static_cast<size_t>(n) * (n + 1) / 2;
  std::vector<Matrix> dtab;
  try {
    dtab.assign(pairs, Matrix(n, n, p));
  } catch (const std::invalid_argument& e) {
    throw ImportError(ImportError::Code::Validation, std::string("import_json: ") + e.what());
  }
  auto pair_index = [&](int i, int j) -> size_t {
    if (strict) return static_cast<size_t>(i) * n - static_cast<size_t>(i) * (i + 1) / 2 + (j - i - 1);
    return static_cast<size_t>(i) * n - static_cast<size_t>(i) * (i - 1) / 2 + (j - i);
  };
  if (!doc.contains("triples") || !doc["triples"].is_array())
    throw ImportError(ImportError::Code::Validation, "import_json: missing triples");
  for (const auto& ent : doc["triples"]) {
    int i = field<int>(ent, "i"), j = field<int>(ent, "j");
    if (i < 0 || j >= n || (strict ? j <= i : j < i))
      throw ImportError(ImportError::Code::Validation, "import_json: triple index range");
    auto flat = ent.at("m").get<std::vector<int64_t>>();
    if (static_cast<int>(flat.size()) != n * n)
      throw ImportError(ImportError::Code::Validation, "import_json: matrix size");
    Matrix m(n, n, p);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        int64_t v = flat[static_cast<size_t>(r) * n + c];
        if (v < 0 || v >= p)
          throw ImportError(ImportError::Code::Validation, "import_json: entry out of range");
        m.set(r, c, v);
      }
    dtab[pair_index(i, j)] = std::move(m);
  }
  std::optional<BilinForm> form;
  if (doc.contains("form")) {
    auto flat = doc["form"].get<std::vector<int64_t>>();
    if (static_cast<int>(flat.size()) != n * n)
      throw ImportError(ImportError::Code::Validation, "import_json: form size");
    Matrix g(n, n, p);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) g.set(r, c, flat[static_cast<size_t>(r) * n + c]);
    try {
      form = BilinForm(g, kind == TsKind::STS ? BilinForm::Symmetry::Alternating
                                              : BilinForm::Symmetry::Symmetric);
    } catch (const std::invalid_argument& e) {
      throw ImportError(ImportError::Code::Validation, std::string("import_json: ") + e.what());
    }
  }
  std::vector<std::string> labels;
  if (doc.contains("labels")) labels = doc["labels"].get<std::vector<std::string>>();
  std::string key = doc.contains("key") ? doc["key"].get<std::string>() : "";
  try {
    return TripleSystem(p, n, kind, std::move(dtab), std::move(form), std::move(labels), key);
  } catch (const std::invalid_argument& e) {
    throw ImportError(ImportError::Code::Validation, std::string("import_json: ") + e.what());
  }
}

}  // namespace

Imported import_json(const std::string& bytes) {
  json doc = parse_or_throw(bytes);
  if (!doc.is_object() || !doc.contains("format"))
    throw ImportError(ImportError::Code::Validation, "import_json: missing format tag");
  std::string fmt = doc["format"].get<std::string>();
  if (fmt == "gsc-1") return import_algebra(doc);
  if (fmt == "tsc-1") return import_triple(doc);
  throw ImportError(ImportError::Code::UnsupportedFormat,
                    "import_json: unsupported format '" + fmt + "'");
}

}  // namespace trisys
