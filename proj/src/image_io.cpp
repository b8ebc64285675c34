// SPDX-License-Identifier: Apache-2.0
#include "houghface/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include "houghface/errors.hpp"

namespace houghface {

namespace {

// Skips PNM whitespace and '#' comments, then reads one unsigned integer.
int readPnmInt(std::istream& in, const std::string& path, const char* what) {
    for (;;) {
        int c = in.peek();
        if (c == EOF) throw ParseError(path + ": unexpected end of file reading " + what);
        if (c == '#') {
            std::string dummy;
            std::getline(in, dummy);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    long v = 0;
    if (!(in >> v) || v < 0)
        throw ParseError(path + ": malformed " + std::string(what));
    return static_cast<int>(v);
}

RawImage finishPgm(int w, int h, int maxval, std::vector<int>&& samples, const std::string& path) {
    if (w <= 0 || h <= 0) throw ParseError(path + ": zero-dimension image");
    if (maxval <= 0 || maxval > 65535) throw ParseError(path + ": bad maxval");
    RawImage img;
    img.width = w;
    img.height = h;
    img.channels = 1;
    img.data.resize(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        int v = samples[i];
        if (v < 0 || v > maxval) throw ParseError(path + ": sample out of range");
        img.data[i] = maxval == 255
                          ? static_cast<std::uint8_t>(v)
                          : static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
    }
    return img;
}

}  // namespace

RawImage decodePgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open file");

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5'))
        throw ParseError(path + ": not a P2/P5 PGM file");
    const bool ascii = magic[1] == '2';

    const int w = readPnmInt(in, path, "width");
    const int h = readPnmInt(in, path, "height");
    const int maxval = readPnmInt(in, path, "maxval");
    if (w <= 0 || h <= 0) throw ParseError(path + ": zero-dimension image");
    constexpr long long kMaxDim = 1 << 20, kMaxPixels = 1LL << 26;
    if (w > kMaxDim || h > kMaxDim || static_cast<long long>(w) * h > kMaxPixels)
        throw ParseError(path + ": image dimensions out of supported range");

    std::vector<int> samples;
    samples.reserve(static_cast<std::size_t>(w) * h);
    if (ascii) {
        for (long i = 0; i < static_cast<long>(w) * h; ++i)
            samples.push_back(readPnmInt(in, path, "pixel"));
    } else {
        in.get();  // single whitespace byte after maxval
        const int bytes_per = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> buf(static_cast<std::size_t>(w) * h * bytes_per);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (static_cast<std::size_t>(in.gcount()) != buf.size())
            throw ParseError(path + ": truncated pixel data");
        for (std::size_t i = 0; i < buf.size(); i += bytes_per)
            samples.push_back(bytes_per == 1 ? buf[i] : (buf[i] << 8) | buf[i + 1]);
    }
    return finishPgm(w, h, maxval, std::move(samples), path);
}

RawImage decodePng(const std::string& path) {
    std::unique_ptr<std::FILE, int (*)(std::FILE*)> fp(std::fopen(path.c_str(), "rb"),
                                                       &std::fclose);
    if (!fp) throw IoError(path + ": cannot open file");

    png_byte header[8];
    if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8) != 0)
        throw ParseError(path + ": not a PNG file");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error("libpng: out of memory");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error("libpng: out of memory");
    }

    RawImage img;
    std::vector<png_bytep> row_ptrs;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ParseError(path + ": corrupt PNG data");
    }

    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    // Normalize to 8-bit gray or RGB.
    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    img.width = static_cast<int>(png_get_image_width(png, info));
    img.height = static_cast<int>(png_get_image_height(png, info));
    img.channels = static_cast<int>(png_get_channels(png, info));
    if (img.width <= 0 || img.height <= 0) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ParseError(path + ": zero-dimension image");
    }
    if (img.channels != 1 && img.channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ParseError(path + ": unsupported channel count " + std::to_string(img.channels));
    }

    img.data.resize(static_cast<std::size_t>(img.width) * img.height * img.channels);
    row_ptrs.resize(img.height);
    const std::size_t stride = static_cast<std::size_t>(img.width) * img.channels;
    for (int y = 0; y < img.height; ++y) row_ptrs[y] = img.data.data() + y * stride;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

RawImage loadRaw(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError(path + ": cannot open file");
    unsigned char magic[2] = {0, 0};
    probe.read(reinterpret_cast<char*>(magic), 2);
    probe.close();

    if (magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5')) return decodePgm(path);
    if (magic[0] == 0x89 && magic[1] == 'P') return decodePng(path);
    throw ParseError(path + ": unrecognized image format (expected PGM P2/P5 or PNG)");
}

void writePgm(const std::string& path, const GrayImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open file for writing");
    out << "P5\n" << img.cols() << " " << img.rows() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data()),
              static_cast<std::streamsize>(img.size()));
    if (!out) throw IoError(path + ": write failed");
}

void writePgmAscii(const std::string& path, const Raster<int>& img, int maxval) {
    std::ofstream out(path);
    if (!out) throw IoError(path + ": cannot open file for writing");
    out << "P2\n" << img.cols() << " " << img.rows() << "\n" << maxval << "\n";
    for (Eigen::Index y = 0; y < img.rows(); ++y) {
        for (Eigen::Index x = 0; x < img.cols(); ++x) {
            out << img(y, x) << (x + 1 == img.cols() ? '\n' : ' ');
        }
    }
    if (!out) throw IoError(path + ": write failed");
}

}  // namespace houghface
