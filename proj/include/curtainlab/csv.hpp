#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace curtainlab {

// Deterministic CSV writer. Doubles are formatted with %.12g so equal seeds
// produce byte-identical files.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {
        std::ostringstream os;
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (i) os << ',';
            os << columns_[i];
        }
        os << '\n';
        body_ = os.str();
    }

    class Row {
    public:
        explicit Row(CsvWriter& w) : w_(w) {}
        Row& col(const std::string& s) {
            cells_.push_back(s);
            return *this;
        }
        Row& col(double v) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g", v);
            cells_.emplace_back(buf);
            return *this;
        }
        Row& col(long long v) { return col(std::to_string(v)); }
        Row& col(int v) { return col(std::to_string(v)); }
        Row& col(std::uint64_t v) { return col(std::to_string(v)); }
        ~Row() {
            std::ostringstream os;
            for (std::size_t i = 0; i < cells_.size(); ++i) {
                if (i) os << ',';
                os << cells_[i];
            }
            os << '\n';
            w_.body_ += os.str();
        }

    private:
        CsvWriter& w_;
        std::vector<std::string> cells_;
    };

    Row row() { return Row(*this); }

    const std::string& text() const { return body_; }

    void save(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open for write: " + path);
        f << body_;
    }

private:
    std::vector<std::string> columns_;
    std::string body_;
};

} // namespace curtainlab
