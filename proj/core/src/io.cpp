#include "lznoise/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace lzn {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string format_g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, std::string_view schema,
                     std::string_view header)
    : path_(path), file_(std::fopen(path.c_str(), "wb")) {
    if (!file_)
        throw std::runtime_error("cannot open output file: " + path);
    write_raw("# schema: ");
    write_raw(schema);
    write_raw("\n");
    write_raw(header);
    write_raw("\n");
}

CsvWriter::~CsvWriter() {
    if (file_)
        std::fclose(file_);
}

void CsvWriter::write_raw(std::string_view bytes) {
    if (!file_)
        throw std::logic_error("write on closed csv writer");
    if (std::fwrite(bytes.data(), 1, bytes.size(), file_) != bytes.size())
        throw std::runtime_error("short write to " + path_);
    file_fnv_ = fnv1a64(bytes, file_fnv_);
}

void CsvWriter::row(std::string_view line) {
    row_fnv_ = fnv1a64(line, row_fnv_);
    row_fnv_ = fnv1a64("\n", row_fnv_);
    write_raw(line);
    write_raw("\n");
    ++rows_;
}

CsvSummary CsvWriter::close() {
    if (file_) {
        if (std::fclose(file_) != 0) {
            file_ = nullptr;
            throw std::runtime_error("failed to close " + path_);
        }
        file_ = nullptr;
    }
    return {path_, rows_, file_fnv_, row_fnv_};
}

}
