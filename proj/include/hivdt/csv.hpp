#ifndef HIVDT_CSV_HPP
#define HIVDT_CSV_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "hivdt/simulate.hpp"
#include "hivdt/sweep.hpp"

namespace hivdt {

/// Shortest decimal form with 17 significant digits; round-trips binary64.
std::string format_double(double v);

/// Writes `n,t,X,Y,V,Z[,omega][,lyapunov]` rows, one per recorded step, in
/// step order, with a trailing newline. Undefined omega entries (the last m
/// steps) are left empty. Returns the byte count; throws SinkError when the
/// sink fails.
std::size_t emit_csv(const TrajectoryRecord& traj, std::ostream& dest);

/// One row per sweep cell, in grid order.
std::size_t emit_sweep_csv(const std::vector<SweepCell>& cells, std::ostream& dest);

/// Numeric CSV contents; empty cells read back as NaN.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv(std::istream& src);

/// Inverse of read_csv under format_double: NaN cells emit as empty.
std::size_t emit_table(const CsvTable& table, std::ostream& dest);

} // namespace hivdt

#endif
