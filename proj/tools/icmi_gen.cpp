// Generates seeded synthetic proximity-scan datasets in the loader's CSV
// format. Useful for demos and for producing test corpora of any size.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "icmi/synth.hpp"

using namespace icmi;

int main(int argc, char** argv)
{
    CLI::App app{"Synthetic proximity-scan dataset generator"};
    SynthParams params;
    std::string out_path;

    app.add_option("--nodes", params.nodes, "community size")->check(CLI::Range(2, 1000000));
    app.add_option("--days", params.days, "number of days")->check(CLI::PositiveNumber);
    app.add_option("--scan-interval", params.scan_interval, "seconds between scans");
    app.add_option("--meetings", params.meetings_per_node_day, "mean meetings per node per day");
    app.add_option("--single-scan-frac", params.single_scan_fraction,
                   "share of meetings lasting one scan")
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--max-run", params.max_run_scans, "longest meeting, in scans");
    app.add_option("--gatherings", params.gatherings_per_day, "group events per day");
    app.add_option("--rssi", params.rssi, "signal strength written on each record");
    app.add_flag("--noise", params.noise, "include records the loader must drop");
    app.add_option("--seed", params.seed, "generator seed");
    app.add_option("--out", out_path, "output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const std::vector<ScanRecord> records = synth_scans(params);
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write " << out_path << '\n';
            return 3;
        }
        write_scans_csv(out, records);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
