#include "hivdt/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace hivdt {

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::size_t write_all(std::ostream& dest, const std::string& payload)
{
    dest.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!dest) {
        throw SinkError("failed writing CSV output");
    }
    return payload.size();
}

} // namespace

std::size_t emit_csv(const TrajectoryRecord& traj, std::ostream& dest)
{
    const bool with_omega = traj.monitors.has_value();
    const bool with_lyapunov = traj.lyapunov.has_value();
    const std::size_t omega_len = with_omega ? traj.monitors->omega.size() : 0;

    std::string out = "n,t,X,Y,V,Z";
    if (with_omega) {
        out += ",omega";
    }
    if (with_lyapunov) {
        out += ",lyapunov";
    }
    out += "\n";

    for (std::size_t n = 0; n < traj.states.size(); ++n) {
        const State& s = traj.states[n];
        out += format_double(static_cast<double>(n));
        out += ",";
        out += format_double(traj.times[n]);
        out += ",";
        out += format_double(s.x);
        out += ",";
        out += format_double(s.y);
        out += ",";
        out += format_double(s.v);
        out += ",";
        out += format_double(s.z);
        if (with_omega) {
            out += ",";
            if (n < omega_len) {
                out += format_double(traj.monitors->omega[n]);
            }
        }
        if (with_lyapunov) {
            out += ",";
            out += format_double(traj.lyapunov->values[n]);
        }
        out += "\n";
    }
    return write_all(dest, out);
}

std::size_t emit_sweep_csv(const std::vector<SweepCell>& cells, std::ostream& dest)
{
    std::string out = "beta,c,tau,r0,r1,predicted,observed,agree,near_threshold,sup_error,error\n";
    for (const SweepCell& cell : cells) {
        out += format_double(cell.beta);
        out += ",";
        out += format_double(cell.c);
        out += ",";
        out += format_double(cell.tau);
        out += ",";
        out += format_double(cell.r0);
        out += ",";
        out += format_double(cell.r1);
        out += ",";
        out += to_string(cell.predicted);
        out += ",";
        out += cell.observed.has_value() ? to_string(*cell.observed) : "Unresolved";
        out += ",";
        out += cell.agree ? "1" : "0";
        out += ",";
        out += cell.near_threshold ? "1" : "0";
        out += ",";
        out += format_double(cell.sup_error);
        out += ",";
        out += cell.error;
        out += "\n";
    }
    return write_all(dest, out);
}

CsvTable read_csv(std::istream& src)
{
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(src, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = line.find(',', pos);
            fields.push_back(line.substr(pos, (comma == std::string::npos ? line.size() : comma) - pos));
            if (comma == std::string::npos) {
                break;
            }
            pos = comma + 1;
        }
        if (first) {
            table.header = std::move(fields);
            first = false;
            continue;
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const std::string& field : fields) {
            if (field.empty()) {
                row.push_back(std::nan(""));
            }
            else {
                row.push_back(std::strtod(field.c_str(), nullptr));
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::size_t emit_table(const CsvTable& table, std::ostream& dest)
{
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i != 0) {
            out += ",";
        }
        out += table.header[i];
    }
    out += "\n";
    for (const std::vector<double>& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i != 0) {
                out += ",";
            }
            if (!std::isnan(row[i])) {
                out += format_double(row[i]);
            }
        }
        out += "\n";
    }
    return write_all(dest, out);
}

} // namespace hivdt
