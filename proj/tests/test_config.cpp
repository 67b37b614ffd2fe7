#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "cff/config.hpp"

using namespace cff;
namespace fs = std::filesystem;

TEST_CASE("the default configuration is valid and matches the documented rig") {
    const RunConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.stride == 4);
    CHECK(c.num_classes == 10);
    CHECK(c.threshold == 0.1);
    CHECK(c.image_width == 800);
    CHECK(c.image_height == 448);
    CHECK(c.cameras == 6);
    CHECK(c.beams == 32);
    CHECK(c.grid.cell_size == 0.6);
    CHECK(c.grid.x_min == -54.0);
    CHECK(c.depth.max_gap == 10);
    CHECK(c.augment.flip_prob == 0.5);

    const LidarConfig lc = c.lidar();
    CHECK(lc.beam_elevations.size() == 32);
    CHECK(lc.max_range == 70.0);
    CHECK(lc.origin.z() == 1.8);
    CHECK(lc.azimuth_resolution == doctest::Approx(0.2 * 3.14159265358979 / 180.0));
}

TEST_CASE("overrides reach every config section") {
    RunConfig c;
    apply_config_entry(c, "stride", "8");
    apply_config_entry(c, "threshold", "0.25");
    apply_config_entry(c, "image_width", "640");
    apply_config_entry(c, "cell_size", "0.5");
    apply_config_entry(c, "x_min", "-50");
    apply_config_entry(c, "x_max", "50");
    apply_config_entry(c, "dilation_shape", "full");
    apply_config_entry(c, "fill_large_holes", "true");
    apply_config_entry(c, "max_gap", "7");
    apply_config_entry(c, "flip_prob", "0.75");
    apply_config_entry(c, "noise_sigma", "0.02");
    apply_config_entry(c, "beams", "16");
    CHECK(c.stride == 8);
    CHECK(c.threshold == 0.25);
    CHECK(c.image_width == 640);
    CHECK(c.grid.cell_size == 0.5);
    CHECK(c.grid.x_min == -50.0);
    CHECK(c.depth.dilation_shape == KernelShape::kFull);
    CHECK(c.depth.fill_large_holes);
    CHECK(c.depth.max_gap == 7);
    CHECK(c.augment.flip_prob == 0.75);
    CHECK(c.noise_sigma == 0.02);
    CHECK(c.lidar().beam_elevations.size() == 16);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("boolean and enum values accept only their documented spellings") {
    RunConfig c;
    apply_config_entry(c, "fill_large_holes", "yes");
    CHECK(c.depth.fill_large_holes);
    apply_config_entry(c, "fill_large_holes", "0");
    CHECK(!c.depth.fill_large_holes);
    CHECK_THROWS_AS(apply_config_entry(c, "fill_large_holes", "maybe"), ParseError);
    CHECK_THROWS_AS(apply_config_entry(c, "dilation_shape", "cross"), ParseError);
    CHECK_THROWS_AS(apply_config_entry(c, "stride", "4.5"), ParseError);  // not integral
    CHECK_THROWS_AS(apply_config_entry(c, "focal", "35mm"), ParseError);
    CHECK_THROWS_AS(apply_config_entry(c, "zoom", "2"), ParseError);  // unknown key
}

TEST_CASE("config text parsing reports the offending line") {
    const RunConfig c = parse_config("# comment\nstride 2\n\nthreshold 0.3\n");
    CHECK(c.stride == 2);
    CHECK(c.threshold == 0.3);

    try {
        parse_config("stride 2\nbogus_key 1\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("stride\n"), ParseError);        // missing value
    CHECK_THROWS_AS(parse_config("stride 2 3\n"), ParseError);    // trailing
    CHECK_THROWS_AS(parse_config("threshold 1.5\n"), InvalidRangeError);
    CHECK_THROWS_AS(parse_config("image_width 801\n"), InvalidRangeError);
    CHECK_THROWS_AS(parse_config("cell_size 0.7\n"), InvalidRangeError);
    CHECK_THROWS_AS(parse_config("beams 0\n"), InvalidRangeError);
    CHECK_THROWS_AS(parse_config("dilation_kernel 4\n"), InvalidRangeError);
}

TEST_CASE("config files load from disk, missing files raise IoError") {
    const fs::path file =
        fs::temp_directory_path() / ("cff_cfg_" + std::to_string(::getpid()) + ".txt");
    {
        std::ofstream out(file);
        out << "cameras 2\nfocal 300\n# done\n";
    }
    const RunConfig c = load_config(file);
    CHECK(c.cameras == 2);
    CHECK(c.focal == 300.0);
    fs::remove(file);

    CHECK_THROWS_AS(load_config(file), IoError);
    {
        std::ofstream out(file);
        out << "stride nope\n";
    }
    try {
        load_config(file);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(file.filename().string()) != std::string::npos);
    }
    fs::remove(file);
}
