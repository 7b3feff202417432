#include "fwm/io.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fwm {

std::string format_double(double v) {
    char buf[40];
    // %.17g always round-trips; prefer the shortest representation that does
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    for (const auto& m : table.meta) os << "# " << m << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        os << table.columns[i] << (i + 1 < table.columns.size() ? "," : "");
    }
    os << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << format_double(row[i]) << (i + 1 < row.size() ? "," : "");
        }
        os << "\n";
    }
    if (!os.good()) throw IoError("write failed: " + path.string());
}

std::vector<std::vector<double>> read_csv(const std::filesystem::path& path,
                                          std::size_t expected_columns) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open: " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || (end && *end != '\0' && *end != ' ' && *end != '\r')) {
                numeric = false;
                break;
            }
            row.push_back(v);
        }
        if (!numeric) {
            if (rows.empty()) continue;  // column header line
            throw IoError("parse error in " + path.string() + " at line " +
                          std::to_string(lineno) + ": '" + line + "'");
        }
        if (row.size() != expected_columns) {
            throw IoError("parse error in " + path.string() + " at line " +
                          std::to_string(lineno) + ": expected " +
                          std::to_string(expected_columns) + " columns, got " +
                          std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    os << text;
    if (!os.good()) throw IoError("write failed: " + path.string());
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const std::size_t workers =
        std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

int default_jobs() {
    if (const char* env = std::getenv("FWM_JOBS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

}  // namespace fwm
