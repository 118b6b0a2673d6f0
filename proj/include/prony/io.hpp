#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "prony/image.hpp"
#include "prony/model.hpp"
#include "prony/pencil.hpp"
#include "prony/randsphere.hpp"

namespace prony::io {

// Parameter files: header t1,...,td,c_re,c_im; one row per source.
void write_params(std::ostream& os, const ParameterSet& params);
ParameterSet read_params(std::istream& is);

// Sample tables: header k1,...,kd,re,im. The key range is inferred from the
// smallest key; rows may come in any order and missing keys stay missing.
void write_samples(std::ostream& os, const SampleTable& table);
SampleTable read_samples(std::istream& is);

// Images as CSV: one line per row (d = 2) or a single line (d = 1).
void write_image_csv(std::ostream& os, const ImageGrid& image);
ImageGrid read_image_csv(std::istream& is);

struct PgmOptions {
    bool binary = true;
    int maxval = 65535;
    double scale = 1.0;   // stored value = round((pixel - offset) * scale), clamped
    double offset = 0.0;
};

void write_pgm(std::ostream& os, const ImageGrid& image, const PgmOptions& opts = {});
/// P2 or P5, 8- or 16-bit depending on the max-value field. Returns raw
/// intensities; values above maxval are rejected.
ImageGrid read_pgm(std::istream& is);

/// Dispatches on extension: .pgm or .csv.
ImageGrid read_image(const std::filesystem::path& path);

void write_report(std::ostream& os, const ReconstructionResult& result);

void write_gap_map(std::ostream& os, const GapMap& map, const std::vector<std::string>& header_comments);

std::string format_double(double v);

}  // namespace prony::io
