#include "nullframe/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nullframe/error.hpp"

namespace nullframe {

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& msg) { throw ValidationError(path + ": " + msg); }

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) invalid(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) invalid(path + "." + key, "missing");
  return *it;
}

const json* optional_field(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double number(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return expr::parse_constant(v.get<std::string>());
    } catch (const Error& e) {
      invalid(path, e.what());
    }
  }
  invalid(path, "expected a number or a constant expression");
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) invalid(path, "expected an integer");
  return v.get<int>();
}

Mat matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) invalid(path, "expected a non-empty array of rows");
  const std::size_t rows = v.size();
  if (!v[0].is_array()) invalid(path + "[0]", "expected an array");
  const std::size_t cols = v[0].size();
  Mat out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    std::string rp = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || v[i].size() != cols) invalid(rp, "expected " + std::to_string(cols) + " entries");
    for (std::size_t j = 0; j < cols; ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = number(v[i][j], rp + "[" + std::to_string(j) + "]");
  }
  return out;
}

std::string coordinate_set(const std::vector<int>& positions, const std::string& prefix) {
  std::string s = "{";
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (i) s += ",";
    s += prefix + std::to_string(positions[i] + 1);
  }
  return s + "}";
}

// "(-,-,+,...)" -> signs, skipping empty slots.
std::vector<int> parse_sign_string(const std::string& text) {
  std::vector<int> out;
  for (char c : text) {
    if (c == '-') out.push_back(-1);
    if (c == '+') out.push_back(1);
  }
  return out;
}

}  // namespace

json parse_manifest_text(const std::string& text) {
  try {
    return json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    std::size_t offset = e.byte ? e.byte - 1 : 0;
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    auto pos = msg.find("syntax error");
    throw ParseError(line, col, pos == std::string::npos ? msg : msg.substr(pos));
  }
}

namespace {

struct Unsigned {
  ManifoldSpec spec;
  int q = 0;
  std::string prefix;
};

// Everything except the metric signature and the checks that depend on it.
Unsigned parse_unsigned(const json& doc) {
  if (!doc.is_object()) invalid("$", "manifest must be an object");
  if (const json* v = optional_field(doc, "schema_version"))
    if (!v->is_string() || v->get<std::string>() != kSchemaVersion) invalid("schema_version", "unsupported version");

  ManifoldSpec spec;
  if (const json* v = optional_field(doc, "name")) spec.name = v->get<std::string>();

  const json& amb = field(doc, "ambient", "$");
  spec.ambient_dim = integer(field(amb, "dim", "ambient"), "ambient.dim");
  const int n = spec.ambient_dim;
  if (n < 2) invalid("ambient.dim", "must be at least 2");
  const int q = integer(field(amb, "index", "ambient"), "ambient.index");
  if (q < 1 || q > n - 1) invalid("ambient.index", "must lie in 1.." + std::to_string(n - 1));
  std::string prefix = "x";
  if (const json* v = optional_field(amb, "coordinate_prefix")) prefix = v->get<std::string>();

  const json& params = field(doc, "params", "$");
  spec.param_dim = integer(field(params, "count", "params"), "params.count");
  const int m = spec.param_dim;
  if (m < 1) invalid("params.count", "must be positive");
  const json& dom = field(params, "domain", "params");
  if (!dom.is_array() || static_cast<int>(dom.size()) != m) invalid("params.domain", "expected " + std::to_string(m) + " intervals");
  for (int i = 0; i < m; ++i) {
    std::string p = "params.domain[" + std::to_string(i) + "]";
    if (!dom[i].is_array() || dom[i].size() != 2) invalid(p, "expected [lo, hi]");
    double lo = number(dom[i][0], p + "[0]"), hi = number(dom[i][1], p + "[1]");
    if (!(lo < hi)) invalid(p, "lo must be below hi");
    spec.domain.emplace_back(lo, hi);
  }

  const json& emb = field(doc, "embedding", "$");
  if (!emb.is_array() || static_cast<int>(emb.size()) != n)
    invalid("embedding", "expected " + std::to_string(n) + " expressions, got " + std::to_string(emb.is_array() ? emb.size() : 0));
  for (int i = 0; i < n; ++i) {
    std::string p = "embedding[" + std::to_string(i) + "]";
    if (!emb[i].is_string()) invalid(p, "expected a string");
    try {
      spec.embedding.push_back(expr::parse(emb[i].get<std::string>(), m));
    } catch (const InputError& e) {
      invalid(p, e.what());
    }
  }

  spec.bronze.matrix = matrix(field(field(doc, "bronze", "$"), "matrix", "bronze"), "bronze.matrix");
  if (spec.bronze.matrix.rows() != n || spec.bronze.matrix.cols() != n)
    invalid("bronze.matrix", "must be " + std::to_string(n) + "x" + std::to_string(n));

  const json& lm = field(doc, "lm", "$");
  spec.lm.l = number(field(lm, "l", "lm"), "lm.l");
  spec.lm.m = number(field(lm, "m", "lm"), "lm.m");
  const json& eta = field(lm, "eta", "lm");
  if (!eta.is_array() || static_cast<int>(eta.size()) != n) invalid("lm.eta", "expected " + std::to_string(n) + " components");
  spec.lm.eta.resize(n);
  for (int i = 0; i < n; ++i) spec.lm.eta(i) = number(eta[i], "lm.eta[" + std::to_string(i) + "]");

  if (const json* fr = optional_field(doc, "frame")) {
    spec.frame_matrix = matrix(field(*fr, "matrix", "frame"), "frame.matrix");
    if (spec.frame_matrix.cols() != m) invalid("frame.matrix", "rows must have " + std::to_string(m) + " entries");
    if (spec.frame_matrix.rows() > m) invalid("frame.matrix", "at most " + std::to_string(m) + " rows");
    if (Eigen::JacobiSVD<Mat>(spec.frame_matrix).singularValues().minCoeff() <= 1e-9)
      invalid("frame.matrix", "rows are not independent");
  }

  if (const json* c = optional_field(doc, "claimed")) {
    if (!c->is_object()) invalid("claimed", "expected an object");
    if (const json* v = optional_field(*c, "rad_dim")) spec.claimed.rad_dim = integer(*v, "claimed.rad_dim");
    if (const json* v = optional_field(*c, "classification")) spec.claimed.classification = v->get<std::string>();
    if (const json* v = optional_field(*c, "screen_generic")) spec.claimed.screen_generic = v->get<bool>();
    if (const json* v = optional_field(*c, "proper")) spec.claimed.proper = v->get<bool>();
    if (const json* v = optional_field(*c, "minimal")) spec.claimed.minimal = v->get<bool>();
    if (const json* v = optional_field(*c, "radical_frame_indices")) {
      if (!v->is_array()) invalid("claimed.radical_frame_indices", "expected an array");
      for (std::size_t i = 0; i < v->size(); ++i) {
        int k = integer((*v)[i], "claimed.radical_frame_indices[" + std::to_string(i) + "]");
        if (k < 1 || k > spec.frame_dim()) invalid("claimed.radical_frame_indices[" + std::to_string(i) + "]", "out of range");
        spec.claimed.radical_frame_indices.push_back(k - 1);
      }
    }
  }
  if (const json* v = optional_field(doc, "notes"))
    for (const auto& note : *v) spec.notes.push_back(note.get<std::string>());

  return {std::move(spec), q, prefix};
}

Mat center_frame(const ManifoldSpec& spec) {
  Vec t = spec.domain_center();
  const int n = spec.ambient_dim;
  Mat jac(n, spec.param_dim);
  for (int i = 0; i < n; ++i) jac.row(i) = spec.embedding[i].eval_jet2(t).grad.transpose();
  return jac * spec.frame_rows().transpose();
}

}  // namespace

ManifoldSpec spec_from_json(const json& doc) {
  Unsigned u = parse_unsigned(doc);
  ManifoldSpec& spec = u.spec;
  const json& amb = doc["ambient"];
  const int n = spec.ambient_dim, q = u.q;
  const std::string& prefix = u.prefix;
  if (const json* tl = optional_field(amb, "timelike_positions")) {
    if (!tl->is_array() || static_cast<int>(tl->size()) != q)
      invalid("ambient.timelike_positions", "expected " + std::to_string(q) + " positions (ambient.index)");
    std::vector<int> pos;
    for (std::size_t i = 0; i < tl->size(); ++i) {
      int p = integer((*tl)[i], "ambient.timelike_positions[" + std::to_string(i) + "]");
      if (p < 1 || p > n) invalid("ambient.timelike_positions[" + std::to_string(i) + "]", "out of range");
      pos.push_back(p - 1);
    }
    try {
      spec.metric = SignatureMetric::with_timelike(n, pos);
    } catch (const ValidationError& e) {
      invalid("ambient.timelike_positions", e.what());
    }
  } else {
    if (spec.claimed.radical_frame_indices.empty() && !spec.claimed.rad_dim)
      invalid("ambient.timelike_positions", "missing, and no claimed radical to infer it from");
    Mat frame = center_frame(spec);
    auto found = infer_signature(frame, spec.claimed.radical_frame_indices, q, spec.claimed.rad_dim.value_or(-1));
    if (found.size() > 1) {
      std::string all;
      for (const auto& c : found) all += " " + coordinate_set(c.timelike, prefix);
      throw AmbiguousSignature(std::to_string(found.size()) + " timelike placements fit the claimed radical:" + all);
    }
    spec.metric = SignatureMetric::with_timelike(n, found[0].timelike);
    spec.notes.push_back("signature inferred from the claimed radical: timelike " + coordinate_set(found[0].timelike, prefix) +
                         " (unique among C(" + std::to_string(n) + "," + std::to_string(q) + ") placements)");
    if (const json* st = optional_field(amb, "stated_signature")) {
      std::string text = st->get<std::string>();
      std::vector<int> eps = parse_sign_string(text);
      std::vector<int> stated;
      for (std::size_t i = 0; i < eps.size(); ++i)
        if (eps[i] < 0) stated.push_back(static_cast<int>(i));
      if (stated != found[0].timelike || static_cast<int>(eps.size()) != n) {
        std::string note = "stated signature " + text + " has " + std::to_string(eps.size()) + " signs for dimension " +
                           std::to_string(n) + " and timelike " + coordinate_set(stated, prefix);
        if (static_cast<int>(stated.size()) == q && !stated.empty() && stated.back() < n) {
          SignatureMetric sg = SignatureMetric::with_timelike(n, stated);
          for (int k : spec.claimed.radical_frame_indices) {
            double v = inner(sg, frame.col(k), frame.col(k));
            note += "; under it g(B" + std::to_string(k + 1) + ",B" + std::to_string(k + 1) + ") = " + std::to_string(v);
          }
        }
        note += "; inferred " + coordinate_set(found[0].timelike, prefix) + " instead";
        spec.notes.push_back(note);
      }
    }
  }

  try {
    validate(spec.lm, spec.metric);
  } catch (const ValidationError& e) {
    invalid("lm.eta", e.what());
  }
  validate(spec);
  return spec;
}

namespace {

json read_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path + ": cannot open manifest");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest_text(ss.str());
}

}  // namespace

SignatureListing infer_manifest_signature(const json& doc, std::optional<int> index) {
  Unsigned u = parse_unsigned(doc);
  const ManifoldSpec& spec = u.spec;
  SignatureListing out;
  out.prefix = u.prefix;
  out.index = index.value_or(u.q);
  if (out.index < 1 || out.index > spec.ambient_dim - 1)
    invalid("index", "must lie in 1.." + std::to_string(spec.ambient_dim - 1));
  if (spec.claimed.radical_frame_indices.empty() && !spec.claimed.rad_dim)
    invalid("claimed", "needs radical_frame_indices or rad_dim to infer a signature");
  out.by_frame_indices = !spec.claimed.radical_frame_indices.empty();
  out.candidates = infer_signature(center_frame(spec), spec.claimed.radical_frame_indices, out.index,
                                   spec.claimed.rad_dim.value_or(-1));
  return out;
}

std::string coordinate_list(const std::vector<int>& positions, const std::string& prefix) {
  return coordinate_set(positions, prefix);
}

ManifoldSpec load_manifest(const std::string& path) { return spec_from_json(read_document(path)); }

json load_document_or_builtin(const std::string& path_or_name) {
  if (!std::filesystem::exists(path_or_name)) {
    auto names = builtin_names();
    if (std::find(names.begin(), names.end(), path_or_name) != names.end()) return builtin_manifest(path_or_name);
  }
  return read_document(path_or_name);
}

ManifoldSpec load_manifest_or_builtin(const std::string& path_or_name) {
  return spec_from_json(load_document_or_builtin(path_or_name));
}

ManifoldSpec builtin_example(const std::string& name) { return spec_from_json(builtin_manifest(name)); }

}  // namespace nullframe
