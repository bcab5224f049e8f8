#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "gridmix/errors.hpp"

namespace gridmix {

// Minimal strict CSV. All file formats in this project are plain
// comma-separated columns with a mandatory header row; fields never contain
// commas or quotes. Every parse error carries path and line number.
class CsvReader {
public:
    explicit CsvReader(const std::filesystem::path& path)
        : path_(path.string()), in_(path)
    {
        if (!in_) {
            fail_input("cannot open file: ", path_);
        }
        if (!read_line()) {
            fail_input(path_, ": file is empty (missing header row)");
        }
        for (const auto cell : cells_) {
            header_.emplace_back(cell);
        }
    }

    const std::vector<std::string>& header() const { return header_; }

    // Index of a required header column.
    std::size_t column(std::string_view name) const
    {
        for (std::size_t i = 0; i < header_.size(); ++i) {
            if (header_[i] == name) {
                return i;
            }
        }
        fail_input(path_, ": missing required column '", std::string(name),
                   "'");
    }

    // Advances to the next data row; returns false at end of file.
    bool next()
    {
        if (!read_line()) {
            return false;
        }
        if (cells_.size() != header_.size()) {
            fail(detail::concat("expected ", header_.size(), " fields, got ",
                                cells_.size()));
        }
        return true;
    }

    std::string_view cell(std::size_t i) const { return cells_[i]; }

    double number(std::size_t i) const
    {
        const std::string_view s = cells_[i];
        double value = 0.0;
        const auto [ptr, ec] =
            std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            fail(detail::concat("field '", header_[i], "' is not a number: '",
                                std::string(s), "'"));
        }
        return value;
    }

    bool empty_cell(std::size_t i) const { return cells_[i].empty(); }

    int line_number() const { return line_number_; }
    const std::string& path() const { return path_; }

    [[noreturn]] void fail(const std::string& message) const
    {
        fail_input(path_, ":", line_number_, ": ", message);
    }

private:
    bool read_line()
    {
        while (std::getline(in_, line_)) {
            ++line_number_;
            if (!line_.empty() && line_.back() == '\r') {
                line_.pop_back();
            }
            if (line_.empty()) {
                continue; // tolerate blank lines
            }
            split();
            return true;
        }
        return false;
    }

    void split()
    {
        cells_.clear();
        std::string_view rest = line_;
        while (true) {
            const auto comma = rest.find(',');
            if (comma == std::string_view::npos) {
                cells_.push_back(rest);
                break;
            }
            cells_.push_back(rest.substr(0, comma));
            rest.remove_prefix(comma + 1);
        }
    }

    std::string path_;
    std::ifstream in_;
    std::string line_;
    std::vector<std::string> header_;
    std::vector<std::string_view> cells_;
    int line_number_ = 0;
};

class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path)
        : path_(path.string()), out_(path)
    {
        if (!out_) {
            fail_input("cannot open file for writing: ", path_);
        }
    }

    template <typename... Cells>
    void row(const Cells&... cells)
    {
        bool first = true;
        (write_cell(cells, first), ...);
        out_ << '\n';
    }

    void close()
    {
        out_.close();
        if (!out_) {
            fail_input("write failed: ", path_);
        }
    }

private:
    void write_cell(double value, bool& first)
    {
        // Shortest round-trip form keeps outputs byte-reproducible.
        char buf[32];
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
        (void)ec;
        sep(first);
        out_.write(buf, ptr - buf);
    }
    void write_cell(std::int64_t value, bool& first)
    {
        sep(first);
        out_ << value;
    }
    void write_cell(std::size_t value, bool& first)
    {
        sep(first);
        out_ << value;
    }
    void write_cell(int value, bool& first)
    {
        sep(first);
        out_ << value;
    }
    void write_cell(std::string_view value, bool& first)
    {
        sep(first);
        out_ << value;
    }
    void write_cell(const std::string& value, bool& first)
    {
        sep(first);
        out_ << value;
    }
    void write_cell(const char* value, bool& first)
    {
        sep(first);
        out_ << value;
    }
    void sep(bool& first)
    {
        if (!first) {
            out_ << ',';
        }
        first = false;
    }

    std::string path_;
    std::ofstream out_;
};

} // namespace gridmix
