#pragma once
// Readers and writers for the CSV/JSON artifacts. Numbers in CSV files carry
// 12 significant digits; JSON numbers are written round-trippable. Readers
// throw FormatError on malformed input.

#include <iosfwd>
#include <span>
#include <string>

#include "chessflow/arithmetic.hpp"
#include "chessflow/billiard.hpp"
#include "chessflow/fractal.hpp"
#include "chessflow/geometry.hpp"
#include "chessflow/rotation.hpp"
#include "chessflow/spectral.hpp"

namespace chessflow::io {

/// Shortest "%.12g" rendering used by every CSV writer.
std::string num(double x);

DomainSpec parse_domain(const std::string& text);
std::string domain_to_json(const DomainSpec& spec);

void write_orbit_csv(std::ostream& out, const Orbit& orbit);

void write_sweep_csv(std::ostream& out, const SweepResult& sweep);
SweepResult read_sweep_csv(std::istream& in);
void write_plateau_json(std::ostream& out, const PlateauReport& report);

/// An empty document, or one without entries, gives a field with K = 0 and
/// `empty` set.
struct FieldFile {
    FourierField field;
    bool empty = false;
};
FieldFile parse_field(const std::string& text);
void write_field_json(std::ostream& out, const FourierField& field);

/// Rows k1,k2,re,im for every mode with a nonzero coefficient.
void write_solution_csv(std::ostream& out, const FourierField& field);
/// Rows x1,x2,u; the first line is a comment with the resolution.
void write_grid_csv(std::ostream& out, const Grid& grid, Basis basis);

void write_diophantine_json(std::ostream& out, const DiophantineReport& report);
void write_regularity_json(std::ostream& out, const RegularityReport& report,
                           const ResidualReport& residual, double s, double beta);
void write_analysis_json(std::ostream& out, const StaircaseAnalysis& analysis);
void write_tilt_csv(std::ostream& out, const TiltStudy& study);

}  // namespace chessflow::io
