#include "anneal/suite.hpp"

#include <algorithm>
#include <cctype>
#include <numbers>

#include "anneal/test_functions.hpp"

namespace anneal {

namespace {

using std::nullopt;
namespace fn = anneal::functions;

std::function<Box(Index)> cube(double lo, double hi) {
  return [lo, hi](Index n) { return Box::uniform(n, lo, hi); };
}

std::function<std::optional<double>(Index)> constant_optimum(double v) {
  return [v](Index) -> std::optional<double> { return v; };
}

std::function<std::optional<Vector>(Index)> constant_minimizer(double v) {
  return [v](Index n) -> std::optional<Vector> { return Vector::Constant(n, v); };
}

std::function<std::optional<Vector>(Index)> fixed_minimizer(std::vector<double> v) {
  return [v = std::move(v)](Index n) -> std::optional<Vector> {
    if (static_cast<Index>(v.size()) != n) return nullopt;
    return Eigen::Map<const Vector>(v.data(), n);
  };
}

SuiteEntry entry(std::string name, std::vector<Index> dims, std::vector<std::string> tags,
                 std::function<Box(Index)> bounds, std::function<double(const Vector&)> f,
                 std::function<std::optional<double>(Index)> opt,
                 std::function<std::optional<Vector>(Index)> xmin) {
  SuiteEntry e;
  e.name = std::move(name);
  e.dimensions = std::move(dims);
  e.source_tags = std::move(tags);
  e.bounds = std::move(bounds);
  e.objective = std::move(f);
  e.optimum = std::move(opt);
  e.minimizer = std::move(xmin);
  return e;
}

const std::vector<Index> kLevyDims = {2,  5,   10,  20,  30,  50,   70,  80,
                                      90, 100, 200, 300, 400, 500, 1000, 2000};

}  // namespace

bool SuiteEntry::supports(Index n) const {
  return std::find(dimensions.begin(), dimensions.end(), n) != dimensions.end();
}

Problem SuiteEntry::problem(Index n) const {
  require(n > 0, name + ": dimension must be positive");
  return Problem(name, bounds(n), objective, optimum(n), minimizer(n));
}

std::vector<SuiteEntry> make_standard_suite() {
  const double pi = std::numbers::pi;
  std::vector<SuiteEntry> s;

  s.push_back(entry("Ackley", {2, 3, 5, 7, 10, 20, 30}, {"hdgsam", "evo"}, cube(-15, 30),
                    [](const Vector& x) { return fn::ackley(x); }, constant_optimum(0),
                    constant_minimizer(0)));
  s.push_back(entry("Bohachevsky 1", {2}, {"hdgsam", "evo"}, cube(-100, 100),
                    [](const Vector& x) { return fn::bohachevsky1(x); }, constant_optimum(0),
                    constant_minimizer(0)));
  s.push_back(entry("Bohachevsky 2", {2}, {"hdgsam", "evo"}, cube(-100, 100),
                    [](const Vector& x) { return fn::bohachevsky2(x); }, constant_optimum(0),
                    constant_minimizer(0)));
  s.push_back(entry("Bohachevsky 3", {2}, {"hdgsam", "evo"}, cube(-100, 100),
                    [](const Vector& x) { return fn::bohachevsky3(x); }, constant_optimum(0),
                    constant_minimizer(0)));
  s.push_back(entry(
      "Branin", {2}, {"hdgsam", "evo"},
      [](Index n) {
        Box b{Vector(n), Vector(n)};
        b.lower << -5.0, 0.0;
        b.upper << 10.0, 15.0;
        return b;
      },
      [](const Vector& x) { return fn::branin(x); }, constant_optimum(0.397887),
      fixed_minimizer({pi, 2.275})));
  s.push_back(entry("Camel", {2}, {"dg"}, cube(-5, 5),
                    [](const Vector& x) { return fn::six_hump_camel(x); },
                    constant_optimum(-1.031628),
                    fixed_minimizer({0.08984201652927098, -0.7126564013807202})));
  s.push_back(entry("De Jong", {3}, {"hdgsam", "evo"}, cube(-5.12, 5.12),
                    [](const Vector& x) { return fn::sphere(x); }, constant_optimum(0),
                    constant_minimizer(0)));
  s.push_back(entry("Easom", {2}, {"hdgsam", "evo"}, cube(-100, 100),
                    [](const Vector& x) { return fn::easom(x); }, constant_optimum(-1),
                    fixed_minimizer({pi, pi})));
  s.push_back(entry("Goldstein-Price", {2}, {"hdgsam", "dg", "evo"}, cube(-2, 2),
                    [](const Vector& x) { return fn::goldstein_price(x); },
                    constant_optimum(3), fixed_minimizer({0.0, -1.0})));
  s.push_back(entry("Griewank", {1, 2, 3, 4, 5, 6, 10, 20, 30}, {"hdgsam", "dg"},
                    cube(-600, 600), [](const Vector& x) { return fn::griewank(x); },
                    constant_optimum(0), constant_minimizer(0)));
  s.push_back(entry("Hansen", {2}, {"dg"}, cube(-10, 10),
                    [](const Vector& x) { return fn::hansen(x); },
                    constant_optimum(-176.541793),
                    fixed_minimizer({-1.3067077043215218, -1.4251284274396787})));
  s.push_back(entry(
      "Hartman-3", {3}, {"hdgsam", "dg", "evo"}, cube(0, 1),
      [](const Vector& x) { return fn::hartman3(x); }, constant_optimum(-3.86278215),
      fixed_minimizer({0.11461434203082951, 0.5556488507905384, 0.8525469538460251})));
  s.push_back(entry("Hartman-6", {6}, {"hdgsam", "dg", "evo"}, cube(0, 1),
                    [](const Vector& x) { return fn::hartman6(x); },
                    constant_optimum(-3.3223680),
                    fixed_minimizer({0.20168951037794658, 0.15001069146456325,
                                     0.4768739733706766, 0.2753324288543796,
                                     0.3116516165632252, 0.6573005308464771})));
  s.push_back(entry("Hump", {2}, {"hdgsam", "evo"}, cube(-5, 5),
                    [](const Vector& x) { return fn::hump(x); }, constant_optimum(0),
                    fixed_minimizer({0.08984201652927098, -0.7126564013807202})));
  s.push_back(entry("Hyper-Ellipsoid", {30}, {"hdgsam", "evo"}, cube(-5.12, 5.12),
                    [](const Vector& x) { return fn::hyper_ellipsoid(x); },
                    constant_optimum(0), constant_minimizer(0)));
  s.push_back(entry("Levy Nr.1", kLevyDims, {"hdgsam", "dg"}, cube(-10, 10),
                    [](const Vector& x) { return fn::levy1(x); }, constant_optimum(0),
                    constant_minimizer(1)));
  s.push_back(entry("Levy Nr.2", kLevyDims, {"hdgsam", "dg", "evo"}, cube(-10, 10),
                    [](const Vector& x) { return fn::levy2(x); }, constant_optimum(0),
                    constant_minimizer(1)));
  s.push_back(entry("Levy Nr.3", {5, 10, 20, 30, 50}, {"evo"}, cube(-5, 5),
                    [](const Vector& x) { return fn::levy3(x); }, constant_optimum(0),
                    constant_minimizer(1)));
  s.push_back(entry(
      "Michalewicz", {2}, {"hdgsam", "evo"}, cube(0, pi),
      [](const Vector& x) { return fn::michalewicz(x); },
      [](Index n) -> std::optional<double> {
        if (n == 2) return -1.8013;
        return nullopt;
      },
      fixed_minimizer({2.202905519833619, 1.5707963269216143})));
  s.push_back(entry("Neumaier 2", {4}, {"hdgsam", "evo"},
                    [](Index n) { return Box::uniform(n, 0.0, static_cast<double>(n)); },
                    [](const Vector& x) { return fn::power_sum(x); }, constant_optimum(0),
                    fixed_minimizer({1.0, 2.0, 2.0, 3.0})));
  s.push_back(entry(
      "Neumaier 3", {10}, {"hdgsam", "evo"},
      [](Index n) {
        const double r = static_cast<double>(n * n);
        return Box::uniform(n, -r, r);
      },
      [](const Vector& x) { return fn::trid(x); },
      [](Index n) -> std::optional<double> {
        const double d = static_cast<double>(n);
        return -d * (d + 4.0) * (d - 1.0) / 6.0;
      },
      [](Index n) -> std::optional<Vector> {
        Vector x(n);
        for (Index i = 0; i < n; ++i) x[i] = static_cast<double>((i + 1) * (n - i));
        return x;
      }));
  s.push_back(entry("Rastrigin", {2, 3, 5, 7, 10}, {"hdgsam", "evo"}, cube(-5.12, 5.12),
                    [](const Vector& x) { return fn::rastrigin(x); }, constant_optimum(0),
                    constant_minimizer(0)));
  s.push_back(entry("Rosenbrock", {2, 5, 10}, {"hdgsam", "evo"}, cube(-5, 10),
                    [](const Vector& x) { return fn::rosenbrock(x); }, constant_optimum(0),
                    constant_minimizer(1)));
  s.push_back(entry("Schaffer Nr.1", {2}, {"hdgsam", "evo"}, cube(-100, 100),
                    [](const Vector& x) { return fn::schaffer1(x); }, constant_optimum(0),
                    constant_minimizer(0)));
  s.push_back(entry("Schaffer Nr.2", {2}, {"hdgsam", "evo"}, cube(-100, 100),
                    [](const Vector& x) { return fn::schaffer2(x); }, constant_optimum(0),
                    constant_minimizer(0)));
  s.push_back(entry("Shekel-5", {4}, {"hdgsam", "dg"}, cube(0, 10),
                    [](const Vector& x) { return fn::shekel(x, 5); },
                    constant_optimum(-10.15320),
                    fixed_minimizer({4.000037152376549, 4.000133278657566,
                                     4.000037151057555, 4.000133277090425})));
  s.push_back(entry("Shekel-7", {4}, {"hdgsam", "dg"}, cube(0, 10),
                    [](const Vector& x) { return fn::shekel(x, 7); },
                    constant_optimum(-10.40294),
                    fixed_minimizer({4.000572914277084, 4.000689366040889,
                                     3.9994897107938447, 3.9996061600067923})));
  s.push_back(entry("Shekel-10", {4}, {"hdgsam", "dg"}, cube(0, 10),
                    [](const Vector& x) { return fn::shekel(x, 10); },
                    constant_optimum(-10.53641),
                    fixed_minimizer({4.000746533201553, 4.000592934538832,
                                     3.9996633972202558, 3.9995098012852255})));
  s.push_back(entry("Shubert Nr.1", {2}, {"hdgsam", "dg", "evo"}, cube(-10, 10),
                    [](const Vector& x) { return fn::shubert1(x); },
                    constant_optimum(-186.7309088),
                    fixed_minimizer({-1.4251284301933853, -0.8003211013887818})));
  s.push_back(entry("Shubert Nr.2", {2}, {"hdgsam", "dg", "evo"}, cube(-10, 10),
                    [](const Vector& x) { return fn::shubert2(x); },
                    constant_optimum(-186.730909),
                    fixed_minimizer({-1.4251284301933853, -0.8003211013887818})));
  s.push_back(entry("Sphere", {3}, {"hdgsam"}, cube(-5.12, 5.12),
                    [](const Vector& x) { return fn::sphere(x); }, constant_optimum(0),
                    constant_minimizer(0)));
  s.push_back(entry("Step", {5, 10, 50}, {"hdgsam", "evo"}, cube(-100, 100),
                    [](const Vector& x) { return fn::step(x); }, constant_optimum(0),
                    constant_minimizer(0)));
  s.push_back(entry("Zakharov", {2, 5, 10}, {"hdgsam"}, cube(-5, 10),
                    [](const Vector& x) { return fn::zakharov(x); }, constant_optimum(0),
                    constant_minimizer(0)));
  SuiteEntry zimmermann =
      entry("Zimmermann", {2}, {"hdgsam", "evo"}, cube(0, 100),
            [](const Vector& x) { return fn::zimmermann(x); }, constant_optimum(0),
            fixed_minimizer({7.0, 2.0}));
  zimmermann.alternate_optimum = -494.741;
  s.push_back(std::move(zimmermann));
  return s;
}

std::string normalize_name(const std::string& name) {
  std::string out;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  // "levynr1" -> "levy1"
  for (std::size_t pos = out.find("nr"); pos != std::string::npos; pos = out.find("nr", pos)) {
    if (pos + 2 < out.size() && std::isdigit(static_cast<unsigned char>(out[pos + 2]))) {
      out.erase(pos, 2);
    } else {
      pos += 2;
    }
  }
  return out;
}

const SuiteEntry& find_entry(const std::vector<SuiteEntry>& suite, const std::string& name) {
  const std::string key = normalize_name(name);
  for (const auto& e : suite) {
    if (normalize_name(e.name) == key) return e;
  }
  throw ConfigError("unknown problem '" + name + "'");
}

namespace {

nlohmann::json to_array(const Vector& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector from_array(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

}  // namespace

nlohmann::json catalog_json(const std::vector<SuiteEntry>& suite) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : suite) {
    for (Index n : e.dimensions) {
      const Box b = e.bounds(n);
      nlohmann::json rec;
      rec["name"] = e.name;
      rec["n"] = n;
      rec["lower"] = to_array(b.lower);
      rec["upper"] = to_array(b.upper);
      const auto opt = e.optimum(n);
      rec["f_opt"] = opt ? nlohmann::json(*opt) : nlohmann::json(nullptr);
      const auto xmin = e.minimizer(n);
      rec["minimizer"] = xmin ? to_array(*xmin) : nlohmann::json(nullptr);
      rec["source_tag"] = e.source_tags;
      if (e.alternate_optimum) rec["alternate_optimum"] = *e.alternate_optimum;
      out.push_back(std::move(rec));
    }
  }
  return out;
}

std::vector<CatalogRecord> parse_catalog(const nlohmann::json& j) {
  std::vector<CatalogRecord> out;
  for (const auto& rec : j) {
    CatalogRecord r;
    r.name = rec.at("name").get<std::string>();
    r.n = rec.at("n").get<Index>();
    r.lower = from_array(rec.at("lower"));
    r.upper = from_array(rec.at("upper"));
    if (!rec.at("f_opt").is_null()) r.f_opt = rec.at("f_opt").get<double>();
    if (!rec.at("minimizer").is_null()) r.minimizer = from_array(rec.at("minimizer"));
    r.source_tags = rec.at("source_tag").get<std::vector<std::string>>();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace anneal

namespace anneal {

std::vector<SuiteCase> gated_subset() {
  return {{"Branin", 2},       {"Goldstein-Price", 2}, {"Easom", 2},
          {"Bohachevsky 1", 2}, {"Bohachevsky 2", 2},  {"Bohachevsky 3", 2},
          {"Hartman-3", 3},     {"Hartman-6", 6},      {"Shekel-5", 4},
          {"Shekel-7", 4},      {"Shekel-10", 4},      {"Shubert Nr.1", 2},
          {"Rastrigin", 2},     {"Rastrigin", 3},      {"Rastrigin", 5},
          {"Griewank", 2},      {"Griewank", 5},       {"Griewank", 10},
          {"Levy Nr.1", 10},    {"Levy Nr.1", 30},     {"Levy Nr.2", 10},
          {"Levy Nr.2", 30},    {"Rosenbrock", 2},     {"Rosenbrock", 5},
          {"Sphere", 3},        {"Step", 5},           {"Step", 10},
          {"Zakharov", 2},      {"Zakharov", 5},       {"Michalewicz", 2},
          {"Neumaier 3", 10},   {"Hyper-Ellipsoid", 30}};
}

std::vector<SuiteCase> parse_selection(const std::vector<SuiteEntry>& suite,
                                       const std::string& selection) {
  std::vector<SuiteCase> out;
  if (selection == "gated") return gated_subset();
  if (selection == "all") {
    for (const auto& e : suite) {
      for (Index n : e.dimensions) out.push_back({e.name, n});
    }
    return out;
  }
  std::size_t pos = 0;
  while (pos <= selection.size()) {
    const std::size_t comma = std::min(selection.find(',', pos), selection.size());
    const std::string item = selection.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) continue;
    const std::size_t colon = item.find(':');
    const SuiteEntry& e = find_entry(suite, item.substr(0, colon));
    if (colon == std::string::npos) {
      for (Index n : e.dimensions) out.push_back({e.name, n});
    } else {
      Index n = 0;
      try {
        n = std::stol(item.substr(colon + 1));
      } catch (const std::exception&) {
        throw ConfigError("suite: bad dimension in \"" + item + "\"");
      }
      require(n > 0, "suite: dimension must be positive in \"" + item + "\"");
      out.push_back({e.name, n});
    }
  }
  if (out.empty()) throw ConfigError("suite: empty selection");
  return out;
}

}  // namespace anneal
