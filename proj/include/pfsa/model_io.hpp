#pragma once

// File formats: JSON model documents and plain-text symbol stream files.
//
// Model document keys: alphabet (label list), states (id list), start (id),
// delta (per-state map symbol label -> state id), morph (per-state probability
// list), metadata (string map). Probabilities are written with 17 significant
// digits so write-then-read is the identity.
//
// Stream files are one symbol label per line; when every label is a single
// character a compact mode of one concatenated line is also accepted and is
// the default for writing.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "pfsa/pfsa.hpp"
#include "pfsa/stream.hpp"

namespace pfsa {

struct FileFormatError : std::runtime_error {
  explicit FileFormatError(const std::string& what) : std::runtime_error(what) {}
};

RawModel read_raw_model(const std::filesystem::path& path);
RawModel parse_raw_model(const std::string& text);

// Validated load; throws ValidationError or FileFormatError.
Pfsa load_model(const std::filesystem::path& path);

std::string serialize_model(const Pfsa& g,
                            const std::map<std::string, std::string>& metadata = {});
void write_model(const Pfsa& g, const std::filesystem::path& path,
                 const std::map<std::string, std::string>& metadata = {});

SymbolStream read_stream(const std::filesystem::path& path, const Alphabet& alphabet);
SymbolStream parse_stream(const std::string& text, const Alphabet& alphabet);

std::string serialize_stream(const SymbolStream& stream, const Alphabet& alphabet);
void write_stream(const SymbolStream& stream, const Alphabet& alphabet,
                  const std::filesystem::path& path);

}  // namespace pfsa
