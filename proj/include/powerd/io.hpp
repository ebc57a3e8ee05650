#pragma once

#include <string>
#include <vector>

#include "powerd/sites.hpp"

namespace powerd {

// Site file: optional '#' comment lines, a "d N" header, then N rows of d
// coordinates with an optional trailing weight column. Coordinates use 17
// significant digits so files round-trip bit-exactly.
void write_sites(const SiteSet& s, const std::string& path,
                 const std::vector<std::string>& comments = {}, bool with_weights = false);
SiteSet read_sites(const std::string& path);

// Whitespace-separated numeric table with '#' comment lines. Timing values
// live in "#T" comment lines so two runs of the same config produce files
// that are identical once those lines are ignored.
struct TextTable {
    std::vector<std::string> comments;
    std::vector<std::string> timing_comments;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_table(const TextTable& t, const std::string& path);
TextTable read_table(const std::string& path);

}  // namespace powerd
