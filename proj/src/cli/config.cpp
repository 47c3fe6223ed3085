#include "ametric/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

namespace ametric::cli {

namespace {

using json = nlohmann::json;

std::size_t line_at_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& msg) const {
    throw ConfigError((pointer.empty() ? std::string("config") : pointer) + ": " + msg,
                      line_of(pointer));
  }

  const json& member(const json& obj, const std::string& ptr, const char* key) const {
    if (!obj.contains(key)) fail(ptr, std::string("missing required field '") + key + "'");
    return obj.at(key);
  }

  const json& object(const json& j, const std::string& ptr) const {
    if (!j.is_object()) fail(ptr, "expected an object");
    return j;
  }

  void only_keys(const json& obj, const std::string& ptr,
                 std::initializer_list<const char*> allowed) const {
    for (const auto& item : obj.items()) {
      const bool known = std::any_of(allowed.begin(), allowed.end(),
                                     [&](const char* k) { return item.key() == k; });
      if (!known) fail(ptr + "/" + item.key(), "unknown field");
    }
  }

  double number(const json& j, const std::string& ptr) const {
    if (!j.is_number()) fail(ptr, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(ptr, "must be finite");
    return v;
  }

  std::size_t count(const json& j, const std::string& ptr) const {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0))
      fail(ptr, "expected a nonnegative integer");
    return j.get<std::size_t>();
  }

  std::uint64_t seed(const json& j, const std::string& ptr) const {
    if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<std::int64_t>() < 0))
      fail(ptr, "expected an unsigned 64-bit integer");
    return j.get<std::uint64_t>();
  }

  std::string string(const json& j, const std::string& ptr) const {
    if (!j.is_string()) fail(ptr, "expected a string");
    return j.get<std::string>();
  }

  /// A scalar is broadcast to d coordinates; an array must have exactly d entries.
  Point point(const json& j, std::size_t d, const std::string& ptr) const {
    if (j.is_number()) return Point(d, number(j, ptr));
    if (!j.is_array()) fail(ptr, "expected a number or an array of numbers");
    if (j.size() != d) fail(ptr, "expected " + std::to_string(d) + " coordinates");
    Point p;
    for (std::size_t i = 0; i < j.size(); ++i) p.push_back(number(j[i], ptr + "/" + std::to_string(i)));
    return p;
  }

  /// Like number(), but also accepts "inf" / "-inf" for unbounded box sides.
  double bound(const json& j, const std::string& ptr) const {
    if (j.is_string()) {
      const auto s = j.get<std::string>();
      if (s == "inf") return INFINITY;
      if (s == "-inf") return -INFINITY;
      fail(ptr, "expected a number, \"inf\" or \"-inf\"");
    }
    return number(j, ptr);
  }

  Point bounds(const json& j, std::size_t d, const std::string& ptr) const {
    if (!j.is_array()) return Point(d, bound(j, ptr));
    if (j.size() != d) fail(ptr, "expected " + std::to_string(d) + " coordinates");
    Point p;
    for (std::size_t i = 0; i < j.size(); ++i) p.push_back(bound(j[i], ptr + "/" + std::to_string(i)));
    return p;
  }

  /// Best-effort line lookup: follows the pointer's keys through the text in order.
  std::size_t line_of(const std::string& pointer) const {
    std::size_t pos = 0;
    std::size_t found = std::string::npos;
    std::size_t start = 1;
    while (start <= pointer.size()) {
      const std::size_t end = std::min(pointer.find('/', start), pointer.size());
      const std::string token = pointer.substr(start, end - start);
      start = end + 1;
      if (token.empty() || std::all_of(token.begin(), token.end(), ::isdigit)) continue;
      const std::size_t hit = text_.find("\"" + token + "\"", pos);
      if (hit == std::string::npos) break;
      found = hit;
      pos = hit + token.size() + 2;
    }
    return found == std::string::npos ? 1 : line_at_offset(text_, found);
  }

 private:
  const std::string& text_;
};

SpaceConfig parse_space(const Parser& p, const json& j) {
  const std::string ptr = "/space";
  p.object(j, ptr);
  p.only_keys(j, ptr, {"kind", "t", "d", "box", "table"});
  SpaceConfig s;
  s.kind = p.string(p.member(j, ptr, "kind"), ptr + "/kind");
  const auto& tj = p.member(j, ptr, "t");
  if (!tj.is_number_integer() || tj.get<std::int64_t>() < 2) p.fail(ptr + "/t", "t must be an integer >= 2");
  s.t = tj.get<int>();
  if (s.kind == "absdiff") {
    if (j.contains("table")) p.fail(ptr + "/table", "absdiff spaces take no table");
    if (j.contains("d")) {
      s.d = p.count(j["d"], ptr + "/d");
      if (s.d == 0) p.fail(ptr + "/d", "d must be >= 1");
    }
    if (j.contains("box")) {
      const auto& box = p.object(j["box"], ptr + "/box");
      p.only_keys(box, ptr + "/box", {"lo", "hi"});
      s.lo = p.bounds(p.member(box, ptr + "/box", "lo"), s.d, ptr + "/box/lo");
      s.hi = p.bounds(p.member(box, ptr + "/box", "hi"), s.d, ptr + "/box/hi");
      for (std::size_t i = 0; i < s.d; ++i) {
        if (!(s.lo[i] < s.hi[i])) p.fail(ptr + "/box", "lo must be < hi in every coordinate");
      }
    } else {
      s.lo = Point(s.d, -INFINITY);
      s.hi = Point(s.d, INFINITY);
    }
  } else if (s.kind == "lifted") {
    if (j.contains("box")) p.fail(ptr + "/box", "lifted spaces take a table, not a box");
    const auto& table = p.member(j, ptr, "table");
    if (!table.is_array() || table.empty()) p.fail(ptr + "/table", "expected a nonempty array of rows");
    for (std::size_t r = 0; r < table.size(); ++r) {
      const std::string rp = ptr + "/table/" + std::to_string(r);
      if (!table[r].is_array() || table[r].size() != table.size()) p.fail(rp, "table must be square");
      std::vector<double> row;
      for (std::size_t c = 0; c < table[r].size(); ++c)
        row.push_back(p.number(table[r][c], rp + "/" + std::to_string(c)));
      s.table.push_back(std::move(row));
    }
    s.d = 1;
  } else {
    p.fail(ptr + "/kind", "unknown space kind '" + s.kind + "' (expected absdiff or lifted)");
  }
  return s;
}

MapSpec parse_map(const Parser& p, const json& j) {
  const std::string ptr = "/map";
  p.object(j, ptr);
  p.only_keys(j, ptr, {"kind", "lambda", "alpha", "beta", "c0", "breakpoints", "pieces", "image"});
  const std::string kind_name = p.string(p.member(j, ptr, "kind"), ptr + "/kind");
  MapKind kind;
  try {
    kind = map_kind_from_string(kind_name);
  } catch (const UsageError& e) {
    p.fail(ptr + "/kind", e.what());
  }
  auto num = [&](const char* key) { return p.number(p.member(j, ptr, key), ptr + "/" + key); };
  switch (kind) {
    case MapKind::kLinearScale: return MapSpec::linear_scale(num("lambda"));
    case MapKind::kPaperExample: return MapSpec::paper_example();
    case MapKind::kAffine: return MapSpec::affine(num("alpha"), num("beta"));
    case MapKind::kConstant: return MapSpec::constant(num("c0"));
    case MapKind::kIdentity: return MapSpec::identity();
    case MapKind::kShift: return MapSpec::shift();
    case MapKind::kPiecewise: {
      const auto& bj = p.member(j, ptr, "breakpoints");
      const auto& pj = p.member(j, ptr, "pieces");
      if (!bj.is_array()) p.fail(ptr + "/breakpoints", "expected an array");
      if (!pj.is_array()) p.fail(ptr + "/pieces", "expected an array of [slope, intercept]");
      std::vector<double> bps;
      for (std::size_t i = 0; i < bj.size(); ++i) bps.push_back(p.number(bj[i], ptr + "/breakpoints/" + std::to_string(i)));
      std::vector<AffinePiece> pieces;
      for (std::size_t i = 0; i < pj.size(); ++i) {
        const std::string pp = ptr + "/pieces/" + std::to_string(i);
        if (!pj[i].is_array() || pj[i].size() != 2) p.fail(pp, "expected [slope, intercept]");
        pieces.push_back({p.number(pj[i][0], pp + "/0"), p.number(pj[i][1], pp + "/1")});
      }
      return MapSpec::piecewise(std::move(bps), std::move(pieces));
    }
    case MapKind::kFiniteTable: {
      const auto& ij = p.member(j, ptr, "image");
      if (!ij.is_array()) p.fail(ptr + "/image", "expected an array of indices");
      std::vector<std::size_t> image;
      for (std::size_t i = 0; i < ij.size(); ++i) image.push_back(p.count(ij[i], ptr + "/image/" + std::to_string(i)));
      return MapSpec::finite_table(std::move(image));
    }
  }
  p.fail(ptr + "/kind", "unsupported map kind");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, std::optional<std::uint64_t> seed_override) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what(), line_at_offset(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  const Parser p(text);
  p.object(root, "");
  p.only_keys(root, "", {"space", "map", "sampling", "tolerances", "solver", "outputs"});

  ExperimentConfig cfg;
  cfg.space = parse_space(p, p.member(root, "", "space"));
  cfg.map = parse_map(p, p.member(root, "", "map"));

  const auto& sj = p.object(p.member(root, "", "sampling"), "/sampling");
  p.only_keys(sj, "/sampling", {"seed", "n_pairs", "n_triples", "n_tuples", "window"});
  if (seed_override) {
    cfg.sampling.seed = *seed_override;
  } else {
    cfg.sampling.seed = p.seed(p.member(sj, "/sampling", "seed"), "/sampling/seed");
  }
  if (sj.contains("n_pairs")) cfg.sampling.n_pairs = p.count(sj["n_pairs"], "/sampling/n_pairs");
  if (sj.contains("n_triples")) cfg.sampling.n_triples = p.count(sj["n_triples"], "/sampling/n_triples");
  if (sj.contains("n_tuples")) cfg.sampling.n_tuples = p.count(sj["n_tuples"], "/sampling/n_tuples");
  if (sj.contains("window")) {
    cfg.sampling.window = p.number(sj["window"], "/sampling/window");
    if (!(cfg.sampling.window > 0)) p.fail("/sampling/window", "must be > 0");
  }
  if (cfg.sampling.n_pairs == 0) p.fail("/sampling/n_pairs", "must be > 0");

  if (root.contains("tolerances")) {
    const auto& tj = p.object(root["tolerances"], "/tolerances");
    p.only_keys(tj, "/tolerances", {"check_tol", "eps", "bound_eps", "eq_tol"});
    auto positive = [&](const char* key, double& out) {
      if (!tj.contains(key)) return;
      const std::string ptr = std::string("/tolerances/") + key;
      out = p.number(tj[key], ptr);
      if (!(out > 0)) p.fail(ptr, "must be > 0");
    };
    positive("check_tol", cfg.tolerances.check_tol);
    positive("eps", cfg.tolerances.eps);
    if (tj.contains("bound_eps") && !tj["bound_eps"].is_null()) {
      double b = 0;
      positive("bound_eps", b);
      cfg.tolerances.bound_eps = b;
    }
    if (tj.contains("eq_tol")) {
      cfg.tolerances.eq_tol = p.number(tj["eq_tol"], "/tolerances/eq_tol");
      if (cfg.tolerances.eq_tol < 0) p.fail("/tolerances/eq_tol", "must be >= 0");
    }
  }

  const std::size_t d = cfg.space.d;
  if (root.contains("solver")) {
    const auto& vj = p.object(root["solver"], "/solver");
    p.only_keys(vj, "/solver", {"x0", "max_iter", "delta", "starts"});
    if (vj.contains("x0")) cfg.solver.x0 = p.point(vj["x0"], d, "/solver/x0");
    if (vj.contains("max_iter")) {
      cfg.solver.max_iter = p.count(vj["max_iter"], "/solver/max_iter");
      if (cfg.solver.max_iter == 0) p.fail("/solver/max_iter", "must be >= 1");
    }
    if (vj.contains("delta") && !vj["delta"].is_null()) {
      const double delta = p.number(vj["delta"], "/solver/delta");
      if (!(delta >= 0 && delta < 1)) p.fail("/solver/delta", "must lie in [0, 1)");
      cfg.solver.delta = delta;
    }
    if (vj.contains("starts")) {
      const auto& st = vj["starts"];
      if (!st.is_array()) p.fail("/solver/starts", "expected an array of points");
      for (std::size_t i = 0; i < st.size(); ++i)
        cfg.solver.starts.push_back(p.point(st[i], d, "/solver/starts/" + std::to_string(i)));
    }
  }
  if (cfg.solver.x0.empty()) cfg.solver.x0 = Point(d, 0.0);

  if (root.contains("outputs")) {
    const auto& oj = p.object(root["outputs"], "/outputs");
    p.only_keys(oj, "/outputs", {"csv_path", "json_path"});
    if (oj.contains("csv_path")) cfg.outputs.csv_path = p.string(oj["csv_path"], "/outputs/csv_path");
    if (oj.contains("json_path")) cfg.outputs.json_path = p.string(oj["json_path"], "/outputs/json_path");
  }
  return cfg;
}

namespace {

nlohmann::ordered_json bound_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  using oj = nlohmann::ordered_json;
  oj space{{"kind", c.space.kind}, {"t", c.space.t}};
  if (c.space.kind == "absdiff") {
    space["d"] = c.space.d;
    oj lo = oj::array();
    oj hi = oj::array();
    for (double v : c.space.lo) lo.push_back(bound_json(v));
    for (double v : c.space.hi) hi.push_back(bound_json(v));
    space["box"] = {{"lo", lo}, {"hi", hi}};
  } else {
    space["table"] = c.space.table;
  }

  oj map{{"kind", to_string(c.map.kind)}};
  switch (c.map.kind) {
    case MapKind::kLinearScale: map["lambda"] = c.map.lambda; break;
    case MapKind::kAffine:
      map["alpha"] = c.map.alpha;
      map["beta"] = c.map.beta;
      break;
    case MapKind::kConstant: map["c0"] = c.map.c0; break;
    case MapKind::kPiecewise: {
      map["breakpoints"] = c.map.breakpoints;
      oj pieces = oj::array();
      for (const auto& pc : c.map.pieces) pieces.push_back({pc.slope, pc.intercept});
      map["pieces"] = pieces;
      break;
    }
    case MapKind::kFiniteTable: map["image"] = c.map.table; break;
    default: break;
  }

  oj tol{{"check_tol", c.tolerances.check_tol},
         {"eps", c.tolerances.eps},
         {"bound_eps", c.tolerances.bound_eps ? oj(*c.tolerances.bound_eps) : oj(nullptr)},
         {"eq_tol", c.tolerances.eq_tol}};
  oj solver{{"x0", c.solver.x0},
            {"max_iter", c.solver.max_iter},
            {"delta", c.solver.delta ? oj(*c.solver.delta) : oj(nullptr)},
            {"starts", c.solver.starts}};
  return oj{{"space", space},
            {"map", map},
            {"sampling",
             {{"seed", c.sampling.seed},
              {"n_pairs", c.sampling.n_pairs},
              {"n_triples", c.sampling.n_triples},
              {"n_tuples", c.sampling.n_tuples},
              {"window", c.sampling.window}}},
            {"tolerances", tol},
            {"solver", solver},
            {"outputs", {{"csv_path", c.outputs.csv_path}, {"json_path", c.outputs.json_path}}}};
}

}  // namespace ametric::cli
