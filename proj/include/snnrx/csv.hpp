#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace snnrx {

// Deterministic CSV writer: doubles printed with %.17g so that re-running a
// seeded experiment reproduces the file byte for byte.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path, const std::vector<std::string>& columns)
        : out_(path) {
        if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << (i ? "," : "") << columns[i];
        out_ << "\n";
    }

    class Row {
      public:
        explicit Row(std::ofstream& out) : out_(out) {}
        Row& operator<<(double v) {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            add(buf);
            return *this;
        }
        Row& operator<<(std::size_t v) { return add_str(std::to_string(v)); }
        Row& operator<<(long v) { return add_str(std::to_string(v)); }
        Row& operator<<(int v) { return add_str(std::to_string(v)); }
        Row& operator<<(const std::string& s) { return add_str(s); }
        ~Row() {
            out_ << "\n";
            out_.flush();  // partial traces survive an aborted run
        }

      private:
        Row& add_str(const std::string& s) {
            add(s.c_str());
            return *this;
        }
        void add(const char* s) {
            if (n_++) out_ << ",";
            out_ << s;
        }
        std::ofstream& out_;
        std::size_t n_ = 0;
    };

    Row row() { return Row(out_); }

  private:
    std::ofstream out_;
};

}  // namespace snnrx
