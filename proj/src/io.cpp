#include "sublap/io.hpp"

#include "sublap/error.hpp"

#include <array>
#include <charconv>
#include <fstream>

namespace sublap {

std::string format_double(double v)
{
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void write_pgm(const std::filesystem::path& path, int width, int height,
               const std::vector<std::uint8_t>& pixels)
{
    if (width <= 0 || height <= 0 || pixels.size() != static_cast<std::size_t>(width) * height)
        throw PreconditionError("write_pgm: pixel count does not match image size");
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw Error("cannot open " + path.string() + " for writing");
    os << "P5\n" << width << ' ' << height << "\n255\n";
    os.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

void write_text(const std::filesystem::path& path, const std::string& contents)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw Error("cannot open " + path.string() + " for writing");
    os << contents;
}

} // namespace sublap
