#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "amod/grid.hpp"

namespace amod {

/// Text CSV: "# key = value" header lines for dim, half_width and samples,
/// then rows "i_1,...,i_n,re,im" in row-major order with %.17g values.
void write_field_csv(std::ostream& os, const SampledField& f);
SampledField read_field_csv(std::istream& is);

/// Files ending in ".bin" hold raw little-endian (re, im) doubles in row-major
/// order with the grid in a "<path>.hdr" sidecar; anything else is CSV.
void write_field(const std::string& path, const SampledField& f);
/// Throws ConfigError on malformed content.
SampledField read_field(const std::string& path);

/// "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> read_key_values(std::istream& is, const std::string& source);
void write_key_values(std::ostream& os, const std::map<std::string, std::string>& kv);

}  // namespace amod
