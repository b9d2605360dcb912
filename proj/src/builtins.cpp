#include <map>
#include <utility>

#include "nullframe/error.hpp"
#include "nullframe/manifest.hpp"

namespace nullframe {

namespace {

// Dense n x n matrix from diagonal entries plus symmetric 2x2 [[3,1],[1,0]] blocks at
// the given 0-based leading positions.
json bronze_matrix(int n, const std::map<int, std::string>& diag, const std::vector<int>& blocks) {
  json rows = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j = 0; j < n; ++j) row.push_back(0);
    rows.push_back(row);
  }
  for (const auto& [i, v] : diag) rows[i][i] = v;
  for (int b : blocks) {
    rows[b][b] = 3;
    rows[b][b + 1] = 1;
    rows[b + 1][b] = 1;
    rows[b + 1][b + 1] = 0;
  }
  return rows;
}

// Frame rows selecting coordinate tangents: row i is the unit vector on source[i] (0-based).
json selection_matrix(int m, const std::vector<int>& source) {
  json rows = json::array();
  for (int s : source) {
    json row = json::array();
    for (int j = 0; j < m; ++j) row.push_back(j == s ? 1 : 0);
    rows.push_back(row);
  }
  return rows;
}

json unit(int n, int i, json value = 1) {
  json v = json::array();
  for (int j = 0; j < n; ++j) v.push_back(j == i ? value : json(0));
  return v;
}

json bronze16() {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["name"] = "bronze16";
  doc["ambient"] = {{"dim", 16},
                    {"index", 2},
                    {"coordinate_prefix", "z"},
                    {"stated_signature", "(-,-,+,+,+,+,+,+,+,,+,+,+,+,+,+,+)"}};
  json dom = json::array();
  for (int i = 0; i < 9; ++i) dom.push_back(i == 6 || i == 7 ? json::array({0.2, 1.2}) : json::array({-1, 1}));
  doc["params"] = {{"count", 9}, {"domain", dom}};
  doc["embedding"] = {"t1 - t2",          "sigma*t4",          "t3 + t5",           "t2 + t3",
                      "t4",               "t3 - t5",           "t2 + t1",           "-t2 + t3",
                      "-cos(pi/6)*t6",    "-cos(pi/6)*t9",     "sin(pi/6)*t6",      "sin(pi/6)*t9",
                      "-sin(t7)*cosh(t8)", "0",                "cos(t7)*sinh(t8)",  "0"};
  std::map<int, std::string> diag;
  for (int i : {0, 1, 2, 3, 5, 6, 7, 9, 11}) diag[i] = "sigma";
  for (int i : {4, 8, 10}) diag[i] = "3-sigma";
  doc["bronze"] = {{"matrix", bronze_matrix(16, diag, {12, 14})}};
  json eta = json::array();
  for (int j = 0; j < 16; ++j) eta.push_back(j == 8 ? json("sin(pi/6)") : j == 10 ? json("cos(pi/6)") : json(0));
  doc["lm"] = {{"l", 1}, {"m", 1}, {"eta", eta}};
  // B1..B9 from the coordinate tangents t2, t3, t1, t5, t4, t6, t9, t7, t8.
  doc["frame"] = {{"matrix", selection_matrix(9, {1, 2, 0, 4, 3, 5, 8, 6, 7})}};
  doc["claimed"] = {{"rad_dim", 2},
                    {"classification", "RLightlike(2)"},
                    {"screen_generic", true},
                    {"proper", true},
                    {"radical_frame_indices", {1, 2}}};
  doc["notes"] = {
      "stated parametrization has 8 parameters with y7 shared by the (z10,z12) and (z13,z15) blocks, so its "
      "Jacobian has rank 8 while the stated frame B1..B9 has 9 independent vectors; the (z10,z12) block is "
      "given its own parameter t9 here",
      "stated B8, B9 are not coordinate tangents; the frame uses the tangents of t7, t8, which span the same "
      "(z13,z15) plane"};
  return doc;
}

json minimal11() {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["name"] = "minimal11";
  doc["ambient"] = {{"dim", 11}, {"index", 1}, {"coordinate_prefix", "y"}, {"stated_signature", "(-,+,+,+,+,+,+,+,+,+,)"}};
  doc["params"] = {{"count", 6},
                   {"domain", {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}, {0.1, 1.4}, {0.1, 1.4}}}};
  doc["embedding"] = {"0",
                      "(sqrt(3)*t4 + t2)/2",
                      "(-sqrt(3)*t2 + t4)/2",
                      "t1",
                      "t4",
                      "sin(t5)*sinh(t6)",
                      "0",
                      "sin(t5)*cosh(t6)",
                      "0",
                      "sqrt(2)*cos(t5)*cosh(t6)",
                      "0"};
  doc["bronze"] = {{"matrix", bronze_matrix(11, {{0, "sigma"}, {1, "3-sigma"}, {2, "3-sigma"}, {3, "sigma"}, {4, "3-sigma"}},
                                            {5, 7, 9})}};
  json eta = json::array();
  for (int j = 0; j < 11; ++j) eta.push_back(j == 0 || j == 3 ? json("sqrt(2)/2") : json(0));
  doc["lm"] = {{"l", 1}, {"m", 1}, {"eta", eta}};
  // B1..B5 from the coordinate tangents t2, t1, t4, t5, t6; t3 does not enter the embedding.
  doc["frame"] = {{"matrix", selection_matrix(6, {1, 0, 3, 4, 5})}};
  doc["claimed"] = {{"rad_dim", 1},
                    {"classification", "RLightlike(1)"},
                    {"screen_generic", true},
                    {"proper", true},
                    {"minimal", true},
                    {"radical_frame_indices", {3}}};
  doc["notes"] = {"parameter t3 does not enter the embedding; the frame has 5 vectors over 6 parameters",
                  "stated relation J B2 = sigma B1 does not hold; J B2 = sigma B2",
                  "stated mu = span{W4,W5} omits W1 = d/dy1, which is g-orthogonal to w(B') and J-invariant"};
  return doc;
}

json toy(const std::string& name, int n, std::vector<int> timelike, int m, json domain, json embedding,
         std::vector<std::string> diag, json eta, json claimed) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["name"] = name;
  doc["ambient"] = {{"dim", n}, {"index", timelike.size()}, {"timelike_positions", timelike}};
  doc["params"] = {{"count", m}, {"domain", domain}};
  doc["embedding"] = embedding;
  std::map<int, std::string> d;
  for (int i = 0; i < n; ++i) d[i] = diag[i];
  doc["bronze"] = {{"matrix", bronze_matrix(n, d, {})}};
  doc["lm"] = {{"l", 1}, {"m", 1}, {"eta", eta}};
  doc["claimed"] = claimed;
  return doc;
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"bronze16", "minimal11", "sphere4", "plane3", "invariant4", "nullcurve2", "nullcurve3", "nullplane3"};
}

json builtin_manifest(const std::string& name) {
  const std::string s = "sigma", c = "3-sigma";
  if (name == "bronze16") return bronze16();
  if (name == "minimal11") return minimal11();
  if (name == "sphere4")
    return toy(name, 4, {4}, 2, {{0.5, 2.5}, {0, 3}}, {"sin(t1)*cos(t2)", "sin(t1)*sin(t2)", "cos(t1)", "0"},
               {s, s, s, c}, unit(4, 2), {{"rad_dim", 0}, {"classification", "NonDegenerate"}});
  if (name == "plane3")
    return toy(name, 3, {3}, 2, {{-1, 1}, {-1, 1}}, {"t1", "t2", "0"}, {s, s, c}, unit(3, 0),
               {{"rad_dim", 0}, {"classification", "NonDegenerate"}, {"minimal", true}});
  if (name == "invariant4")
    return toy(name, 4, {1}, 2, {{-1, 1}, {-1, 1}}, {"t1", "t1", "t2", "0"}, {s, s, s, c}, unit(4, 3),
               {{"rad_dim", 1}, {"classification", "RLightlike(1)"}, {"proper", false}});
  if (name == "nullcurve2")
    return toy(name, 2, {1}, 1, {{-1, 1}}, {"t1", "t1"}, {s, s}, unit(2, 1),
               {{"rad_dim", 1}, {"classification", "TotallyLightlike"}});
  if (name == "nullcurve3")
    return toy(name, 3, {1}, 1, {{-1, 1}}, {"t1", "t1", "0"}, {s, s, s}, unit(3, 2),
               {{"rad_dim", 1}, {"classification", "Isotropic"}});
  if (name == "nullplane3")
    return toy(name, 3, {1}, 2, {{-1, 1}, {-1, 1}}, {"t1", "t1", "t2"}, {s, s, s}, unit(3, 2),
               {{"rad_dim", 1}, {"classification", "Coisotropic"}});
  throw UnknownExample("unknown example '" + name + "'");
}

}  // namespace nullframe
