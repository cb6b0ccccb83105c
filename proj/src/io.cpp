#include "tflag/io.hpp"

#include <fstream>
#include <sstream>

#include "tflag/errors.hpp"

namespace tflag {

namespace {

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

int parse_int(const std::string& s, int line_no) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw SchemaError("line " + std::to_string(line_no) + ": expected an integer, got '" + s + "'");
}

nlohmann::json integer_json(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

mpz_class integer_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    const Rational r = parse_rational(j.get<std::string>());
    if (r.get_den() != 1) throw SchemaError("expected an integer");
    return r.get_num();
  }
  throw SchemaError("expected an integer");
}

}  // namespace

Model parse_model_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  std::optional<Model> model;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto words = split_words(line);
    if (words.empty()) continue;
    if (!model) {
      if (words.size() != 2) throw SchemaError("line " + std::to_string(line_no) + ": expected 'theory n'");
      const int n = parse_int(words[1], line_no);
      if (n < 0) throw SchemaError("negative vertex count");
      model.emplace(parse_theory(words[0]), n);
      continue;
    }
    try {
      if (words[0] == "color") {
        if (words.size() != 3) throw SchemaError("expected 'color v a'");
        model->set_color(parse_int(words[1], line_no), parse_int(words[2], line_no));
      } else if (words.size() == 2) {
        model->add_edge(parse_int(words[0], line_no), parse_int(words[1], line_no));
      } else if (words.size() == 3) {
        model->add_triple(parse_int(words[0], line_no), parse_int(words[1], line_no),
                          parse_int(words[2], line_no));
      } else {
        throw SchemaError("malformed tuple");
      }
    } catch (const Error& e) {
      throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!model) throw SchemaError("missing 'theory n' header");
  model->check_structure();
  return *model;
}

std::string format_model_text(const Model& m) {
  std::ostringstream out;
  out << theory_name(m.theory()) << ' ' << m.size() << '\n';
  for (const auto& t : m.tuples()) {
    for (std::size_t i = 0; i < t.size(); ++i) out << (i ? " " : "") << t[i];
    out << '\n';
  }
  if (m.colored()) {
    for (int v = 0; v < m.size(); ++v) out << "color " << v << ' ' << m.color(v) << '\n';
  }
  return out.str();
}

Model read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open model file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model_text(buf.str());
}

nlohmann::json model_to_json(const Model& m) {
  nlohmann::json j;
  j["theory"] = std::string(theory_name(m.theory()));
  j["n"] = m.size();
  j["tuples"] = m.tuples();
  if (m.colored()) {
    std::vector<int> colors;
    for (int v = 0; v < m.size(); ++v) colors.push_back(m.color(v));
    j["colors"] = colors;
  }
  return j;
}

Model model_from_json(const nlohmann::json& j) {
  try {
    Model m(parse_theory(j.at("theory").get<std::string>()), j.at("n").get<int>());
    for (const auto& t : j.value("tuples", nlohmann::json::array())) {
      const auto v = t.get<std::vector<int>>();
      if (v.size() == 2) {
        m.add_edge(v[0], v[1]);
      } else if (v.size() == 3) {
        m.add_triple(v[0], v[1], v[2]);
      } else {
        throw SchemaError("tuple of unsupported length");
      }
    }
    if (j.contains("colors")) {
      const auto colors = j.at("colors").get<std::vector<int>>();
      if (static_cast<int>(colors.size()) != m.size()) throw SchemaError("colour list length differs from n");
      for (int v = 0; v < m.size(); ++v) m.set_color(v, colors[v]);
    }
    m.check_structure();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed model JSON: ") + e.what());
  } catch (const IndexError& e) {
    throw SchemaError(std::string("malformed model JSON: ") + e.what());
  }
}

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(mpz_class(std::to_string(j.get<long long>())));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw SchemaError("expected a rational as an integer or a \"p/q\" string");
}

nlohmann::json flag_type_to_json(const FlagType& type) {
  std::vector<int> labels;
  for (int i = 1; i <= type.size(); ++i) labels.push_back(i);
  return {{"model", model_to_json(type.base())}, {"labels", labels}};
}

FlagType flag_type_from_json(const nlohmann::json& j) {
  try {
    const Model base = model_from_json(j.at("model"));
    const auto labels = j.value("labels", std::vector<int>{});
    if (static_cast<int>(labels.size()) != base.size()) throw SchemaError("type must be fully labelled");
    std::vector<int> order(labels.size(), -1);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] < 1 || labels[i] > base.size() || order[labels[i] - 1] != -1) {
        throw SchemaError("labels must be a permutation of 1..n");
      }
      order[labels[i] - 1] = static_cast<int>(i);
    }
    return FlagType(induced(base, order));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed type JSON: ") + e.what());
  }
}

nlohmann::json element_to_json(const AlgebraElement& a) {
  nlohmann::json j;
  j["theory"] = std::string(theory_name(a.theory()));
  j["type"] = flag_type_to_json(a.type());
  j["level"] = a.level();
  nlohmann::json coeffs = nlohmann::json::array();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    coeffs.push_back({i, integer_json(a[i].get_num()), integer_json(a[i].get_den())});
  }
  j["coeffs"] = coeffs;
  return j;
}

AlgebraElement element_from_json(const nlohmann::json& j) {
  try {
    const TheoryId theory_id = parse_theory(j.at("theory").get<std::string>());
    const FlagType type = j.contains("type") ? flag_type_from_json(j.at("type")) : FlagType::empty(theory_id);
    if (type.theory() != theory_id) throw SchemaError("type theory differs from element theory");
    AlgebraElement a(type, j.at("level").get<int>());
    for (const auto& entry : j.at("coeffs")) {
      if (!entry.is_array() || entry.size() != 3) throw SchemaError("coefficient entries are [index, num, den]");
      const auto idx = entry[0].get<long long>();
      if (idx < 0 || static_cast<std::size_t>(idx) >= a.size()) {
        throw SchemaError("flag index " + std::to_string(idx) + " outside the basis of size " +
                          std::to_string(a.size()));
      }
      const mpz_class den = integer_from_json(entry[2]);
      if (den == 0) throw SchemaError("zero denominator");
      Rational r(integer_from_json(entry[1]), den);
      r.canonicalize();
      a[static_cast<std::size_t>(idx)] = r;
    }
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed element JSON: ") + e.what());
  }
}

}  // namespace tflag
