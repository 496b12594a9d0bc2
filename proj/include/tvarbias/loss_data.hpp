#ifndef TVARBIAS_LOSS_DATA_HPP
#define TVARBIAS_LOSS_DATA_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace tvarbias {

/// Malformed or unusable input data.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class HeaderMode {
    automatic,  // first row is a header when its selected field is not numeric
    present,
    absent,
};

struct LossColumnOptions {
    /// Column name (requires a header) or 0-based index. Empty = first column.
    std::string column;
    HeaderMode header = HeaderMode::automatic;
    char delimiter = ',';
};

/// Reads one numeric column of a delimited text file. Blank lines are
/// skipped; quoted fields follow RFC 4180. Throws DataError naming `source`
/// and the offending line numbers.
std::vector<double> read_loss_column(std::istream& in, const LossColumnOptions& options,
                                     const std::string& source);

std::vector<double> read_loss_file(const std::string& path, const LossColumnOptions& options);

/// Splits one record; exposed for testing.
std::vector<std::string> split_record(const std::string& line, char delimiter);

}  // namespace tvarbias

#endif  // TVARBIAS_LOSS_DATA_HPP
