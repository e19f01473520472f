#pragma once

// Window-step vectors evaluated in 50-digit arithmetic, rounded to 20 digits.
// Fixed constants: e = y = 0.3, tx_threshold = 20, w_min = 1, global timeout 5 s.

namespace pcnsim::testing {

struct WindowVector {
    double g, beta, window, cap, alpha, et;
    unsigned tot_tx, tot_mark;
    bool marked;
    double time_sent, now;
    bool has_deadline;
    double deadline;
    double want_alpha, want_et, want_d, want_p, want_window;
    unsigned want_tot_tx, want_tot_mark;
};

inline constexpr WindowVector kWindowVectors[] = {
    {8.0000000000000000000, 1.3000000000000000000, 250.19000000000000000, 5000.0000000000000000, 0.0, 0.24200000000000000000, 0, 0, false, 5.9910000000000000000, 8.4380000000000000000, true, 0.60000000000000000000, 0.0, 0.90350000000000000000, 1.5058333333333333333, 0.0, 251.49000000000000000, 1, 0},
    {8.0000000000000000000, 1.3000000000000000000, 50.040000000000000000, 100.00000000000000000, 0.44500000000000000000, 1.1780000000000000000, 20, 2, true, 6.9550000000000000000, 7.2570000000000000000, true, 2.0000000000000000000, 0.35435714285714285714, 0.91520000000000000000, 0.45760000000000000000, 0.62204856015275090789, 46.149086256244543071, 0, 0},
    {8.0000000000000000000, 1.3000000000000000000, 3.2800000000000000000, 100.00000000000000000, 0.59100000000000000000, 0.14500000000000000000, 20, 1, false, 2.1810000000000000000, 3.4270000000000000000, false, 0.90000000000000000000, 0.42798571428571428571, 0.47530000000000000000, 0.095060000000000000000, 0.92249424755633582432, 2.9017773585019023120, 0, 0},
    {7.0000000000000000000, 0.80000000000000000000, 10.690000000000000000, 100.00000000000000000, 0.58500000000000000000, 0.42000000000000000000, 19, 17, false, 1.6880000000000000000, 4.1300000000000000000, true, 1.1000000000000000000, 0.58500000000000000000, 1.0266000000000000000, 0.93327272727272727273, 0.60630747156915825229, 9.7640818755608140404, 20, 17},
    {8.0000000000000000000, 1.3000000000000000000, 50.470000000000000000, 100.00000000000000000, 0.56100000000000000000, 1.0660000000000000000, 0, 0, false, 8.7110000000000000000, 10.522000000000000000, true, 2.0000000000000000000, 0.56100000000000000000, 1.2895000000000000000, 0.64475000000000000000, 0.68888036256194689502, 46.124026012687317526, 1, 0},
    {8.0000000000000000000, 1.3000000000000000000, 4999.5000000000000000, 5000.0000000000000000, 0.0, 0.41800000000000000000, 19, 9, true, 3.9990000000000000000, 4.3940000000000000000, true, 1.1000000000000000000, 0.0, 0.41110000000000000000, 0.37372727272727272727, 0.0, 5000.0000000000000000, 20, 10},
    {8.0000000000000000000, 1.3000000000000000000, 80.670000000000000000, 5000.0000000000000000, 0.89700000000000000000, 0.19900000000000000000, 19, 14, true, 1.9340000000000000000, 4.0900000000000000000, true, 0.90000000000000000000, 0.89700000000000000000, 0.78610000000000000000, 0.87344444444444444444, 0.90942485948463357362, 71.499587073171826202, 20, 15},
    {7.0000000000000000000, 0.80000000000000000000, 10.960000000000000000, 2000.0000000000000000, 0.15600000000000000000, 1.4180000000000000000, 20, 13, true, 1.2710000000000000000, 3.6160000000000000000, true, 1.1000000000000000000, 0.30920000000000000000, 1.6961000000000000000, 1.5419090909090909091, 0.16368000442716790838, 10.703723878782605675, 0, 0},
    {8.0000000000000000000, 1.3000000000000000000, 250.43000000000000000, 2000.0000000000000000, 0.60900000000000000000, 0.19000000000000000000, 20, 18, false, 1.5330000000000000000, 2.6980000000000000000, false, 0.90000000000000000000, 0.68344285714285714286, 0.48250000000000000000, 0.096500000000000000000, 0.96393724970442270624, 220.25514931956517771, 0, 0},
    {8.0000000000000000000, 1.3000000000000000000, 3.0700000000000000000, 2000.0000000000000000, 0.66300000000000000000, 1.8660000000000000000, 20, 9, false, 5.6850000000000000000, 5.8370000000000000000, true, 0.90000000000000000000, 0.59267142857142857143, 1.3518000000000000000, 1.5020000000000000000, 0.45579191262486194852, 2.8950898535302092273, 0, 0},
    {8.0000000000000000000, 1.3000000000000000000, 250.21000000000000000, 100.00000000000000000, 1.0000000000000000000, 0.63800000000000000000, 20, 1, true, 2.1190000000000000000, 3.1930000000000000000, true, 0.90000000000000000000, 0.72857142857142857143, 0.76880000000000000000, 0.85422222222222222222, 0.76299315615707653548, 100.00000000000000000, 0, 0},
    {7.0000000000000000000, 0.80000000000000000000, 999.63000000000000000, 100.00000000000000000, 0.17100000000000000000, 1.8590000000000000000, 20, 12, false, 2.2430000000000000000, 4.0660000000000000000, true, 2.0000000000000000000, 0.29112857142857142857, 1.8482000000000000000, 0.92410000000000000000, 0.31971336445450478015, 100.00000000000000000, 0, 0},
    {8.0000000000000000000, 1.3000000000000000000, 80.900000000000000000, 5000.0000000000000000, 0.36800000000000000000, 0.41000000000000000000, 20, 7, true, 2.4780000000000000000, 3.4880000000000000000, true, 1.5000000000000000000, 0.37188571428571428571, 0.59000000000000000000, 0.39333333333333333333, 0.67768478455532740242, 74.046912616184251643, 0, 0},
    {8.0000000000000000000, 1.3000000000000000000, 50.010000000000000000, 5000.0000000000000000, 0.85200000000000000000, 0.34800000000000000000, 5, 2, true, 6.8640000000000000000, 9.1130000000000000000, true, 0.80000000000000000000, 0.85200000000000000000, 0.91830000000000000000, 1.1478750000000000000, 0.83205751963207369479, 44.808600430399999315, 6, 3},
    {8.0000000000000000000, 1.3000000000000000000, 250.16000000000000000, 100.00000000000000000, 0.46800000000000000000, 0.26200000000000000000, 20, 12, true, 7.8890000000000000000, 10.547000000000000000, false, 0.90000000000000000000, 0.51331428571428571429, 0.98080000000000000000, 0.19616000000000000000, 0.87738215712206120189, 100.00000000000000000, 0, 0},
    {7.0000000000000000000, 0.80000000000000000000, 1.2400000000000000000, 100.00000000000000000, 0.0, 0.74600000000000000000, 5, 3, true, 0.86100000000000000000, 1.3400000000000000000, true, 0.60000000000000000000, 0.0, 0.66590000000000000000, 1.1098333333333333333, 0.0, 2.0400000000000000000, 6, 4},
    {8.0000000000000000000, 1.3000000000000000000, 10.680000000000000000, 100.00000000000000000, 0.97200000000000000000, 1.8400000000000000000, 19, 19, true, 3.4070000000000000000, 5.9820000000000000000, true, 0.90000000000000000000, 0.97200000000000000000, 2.0605000000000000000, 2.2894444444444444444, 0.93704964130258125933, 9.4290387288610540188, 20, 20},
    {8.0000000000000000000, 1.3000000000000000000, 10.810000000000000000, 2000.0000000000000000, 0.97900000000000000000, 0.30100000000000000000, 19, 19, true, 1.8890000000000000000, 3.9480000000000000000, true, 0.90000000000000000000, 0.97900000000000000000, 0.82840000000000000000, 0.92044444444444444444, 0.98065439686377713204, 9.4848907462378211503, 20, 20},
    {8.0000000000000000000, 1.3000000000000000000, 1500.6100000000000000, 2000.0000000000000000, 0.088000000000000000000, 1.5660000000000000000, 5, 0, false, 4.3370000000000000000, 6.3570000000000000000, true, 2.0000000000000000000, 0.088000000000000000000, 1.7022000000000000000, 0.85110000000000000000, 0.12637151797468752327, 1476.9057045515005195, 6, 0},
    {7.0000000000000000000, 0.80000000000000000000, 10.660000000000000000, 100.00000000000000000, 0.21100000000000000000, 1.9220000000000000000, 19, 4, false, 0.44300000000000000000, 2.6660000000000000000, true, 0.80000000000000000000, 0.21100000000000000000, 2.0123000000000000000, 2.5153750000000000000, 0.019967191400586846629, 10.629592819952820602, 20, 4},
};

}  // namespace pcnsim::testing
