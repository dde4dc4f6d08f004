#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace lzn {

std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t seed = 0xcbf29ce484222325ull);

// Shortest round-trippable decimal formatting used for all numeric output.
std::string format_g17(double x);

struct CsvSummary {
    std::string path;
    long long rows = 0;
    std::uint64_t file_fnv = 0;
    std::uint64_t row_fnv = 0;
};

// CSV file with a `# schema: <name>` comment line, a header line, and hashed
// content: file_fnv covers every byte written, row_fnv only the data rows.
class CsvWriter {
public:
    CsvWriter(const std::string& path, std::string_view schema,
              std::string_view header);
    ~CsvWriter();

    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(std::string_view line);
    CsvSummary close();

private:
    void write_raw(std::string_view bytes);

    std::string path_;
    std::FILE* file_;
    std::uint64_t file_fnv_ = 0xcbf29ce484222325ull;
    std::uint64_t row_fnv_ = 0xcbf29ce484222325ull;
    long long rows_ = 0;
};

}
