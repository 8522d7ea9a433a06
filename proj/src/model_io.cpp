#include "pfsa/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pfsa {

namespace {

using nlohmann::json;

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileFormatError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileFormatError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw FileFormatError("write failed for " + path.string());
}

}  // namespace

RawModel parse_raw_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FileFormatError(std::string("model document is not valid JSON: ") + e.what());
  }
  try {
    RawModel raw;
    raw.alphabet = doc.at("alphabet").get<std::vector<std::string>>();
    raw.states = doc.at("states").get<std::vector<std::string>>();
    raw.start = doc.at("start").get<std::string>();
    const json& delta = doc.at("delta");
    const json& morph = doc.at("morph");
    raw.delta.reserve(raw.states.size());
    raw.morph.reserve(raw.states.size());
    for (const std::string& state : raw.states) {
      std::vector<std::string> drow;
      drow.reserve(raw.alphabet.size());
      const json& dmap = delta.at(state);
      for (const std::string& symbol : raw.alphabet) drow.push_back(dmap.at(symbol).get<std::string>());
      raw.delta.push_back(std::move(drow));
      raw.morph.push_back(morph.at(state).get<std::vector<double>>());
    }
    if (doc.contains("metadata")) {
      raw.metadata = doc.at("metadata").get<std::map<std::string, std::string>>();
    }
    return raw;
  } catch (const json::exception& e) {
    throw FileFormatError(std::string("model document is malformed: ") + e.what());
  }
}

RawModel read_raw_model(const std::filesystem::path& path) {
  return parse_raw_model(slurp(path));
}

Pfsa load_model(const std::filesystem::path& path) {
  return Pfsa::validate(read_raw_model(path));
}

std::string serialize_model(const Pfsa& g, const std::map<std::string, std::string>& metadata) {
  json doc;
  doc["alphabet"] = g.alphabet().labels();
  doc["states"] = g.state_labels();
  doc["start"] = g.state_labels()[static_cast<size_t>(g.start())];
  json delta = json::object();
  json morph = json::object();
  for (int q = 0; q < g.state_count(); ++q) {
    const std::string& state = g.state_labels()[static_cast<size_t>(q)];
    json dmap = json::object();
    for (int s = 0; s < g.alphabet().size(); ++s) {
      dmap[g.alphabet().label(s)] = g.state_labels()[static_cast<size_t>(g.next(q, s))];
    }
    delta[state] = std::move(dmap);
    morph[state] = g.morph_rows()[static_cast<size_t>(q)];
  }
  doc["delta"] = std::move(delta);
  doc["morph"] = std::move(morph);
  if (!metadata.empty()) doc["metadata"] = metadata;
  return doc.dump(2) + "\n";
}

void write_model(const Pfsa& g, const std::filesystem::path& path,
                 const std::map<std::string, std::string>& metadata) {
  spit(path, serialize_model(g, metadata));
}

SymbolStream parse_stream(const std::string& text, const Alphabet& alphabet) {
  SymbolStream out;
  // Label-per-line when any newline separates symbols; otherwise a compact
  // single line of concatenated one-character labels.
  const bool multiline = text.find('\n') != std::string::npos &&
                         text.find('\n') != text.size() - 1;
  if (multiline || !alphabet.all_single_char()) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto idx = alphabet.index(line);
      if (!idx) throw UnknownSymbolError("unknown symbol label: " + line);
      out.symbols.push_back(*idx);
    }
  } else {
    for (char c : text) {
      if (c == '\n' || c == '\r') continue;
      const auto idx = alphabet.index(std::string(1, c));
      if (!idx) throw UnknownSymbolError(std::string("unknown symbol character: ") + c);
      out.symbols.push_back(*idx);
    }
  }
  return out;
}

SymbolStream read_stream(const std::filesystem::path& path, const Alphabet& alphabet) {
  return parse_stream(slurp(path), alphabet);
}

std::string serialize_stream(const SymbolStream& stream, const Alphabet& alphabet) {
  std::string out;
  if (alphabet.all_single_char()) {
    out.reserve(stream.size() + 1);
    for (int s : stream.symbols) out += alphabet.label(s);
    out += '\n';
  } else {
    for (int s : stream.symbols) {
      out += alphabet.label(s);
      out += '\n';
    }
  }
  return out;
}

void write_stream(const SymbolStream& stream, const Alphabet& alphabet,
                  const std::filesystem::path& path) {
  spit(path, serialize_stream(stream, alphabet));
}

}  // namespace pfsa
