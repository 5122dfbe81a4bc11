"""Critical values of the studentized range statistic.

Upper quantiles q(k, df) for significance levels 0.05 and 0.01, group counts
k = 2..15, on the conventional df ladder 1..20, 24, 30, 40, 60, 120. Values
agree with the published Harter tables to table precision. Lookups between
ladder rows interpolate linearly in 1/df; df above 120 uses the infinite-df
row.
"""

from __future__ import annotations

K_MIN = 2
K_MAX = 15

_DF_LADDER = (
    1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20,
    24, 30, 40, 60, 120,
)

# Rows follow _DF_LADDER, final row is df = infinity; columns are k = 2..15.
_Q_TABLE: dict[float, tuple[tuple[float, ...], ...]] = {
    0.05: (
        (17.9693, 26.9755, 32.8187, 37.0815, 40.4076, 43.1186, 45.3973, 47.3566, 49.0710, 50.5922, 51.9574, 53.1939, 54.3230, 55.3607),
        (6.0849, 8.3308, 9.7980, 10.8811, 11.7343, 12.4349, 13.0273, 13.5390, 13.9885, 14.3886, 14.7487, 15.0757, 15.3748, 15.6503),
        (4.5007, 5.9096, 6.8245, 7.5017, 8.0371, 8.4783, 8.8525, 9.1766, 9.4620, 9.7166, 9.9460, 10.1547, 10.3459, 10.5222),
        (3.9265, 5.0402, 5.7571, 6.2870, 6.7064, 7.0526, 7.3465, 7.6015, 7.8263, 8.0271, 8.2083, 8.3732, 8.5245, 8.6640),
        (3.6354, 4.6017, 5.2183, 5.6731, 6.0329, 6.3299, 6.5823, 6.8014, 6.9947, 7.1674, 7.3234, 7.4655, 7.5959, 7.7163),
        (3.4605, 4.3392, 4.8956, 5.3049, 5.6284, 5.8953, 6.1222, 6.3192, 6.4931, 6.6485, 6.7890, 6.9169, 7.0344, 7.1428),
        (3.3441, 4.1649, 4.6813, 5.0601, 5.3591, 5.6057, 5.8153, 5.9973, 6.1579, 6.3016, 6.4314, 6.5497, 6.6583, 6.7586),
        (3.2612, 4.0410, 4.5288, 4.8858, 5.1672, 5.3991, 5.5962, 5.7673, 5.9183, 6.0533, 6.1753, 6.2866, 6.3887, 6.4831),
        (3.1992, 3.9485, 4.4149, 4.7554, 5.0235, 5.2444, 5.4319, 5.5947, 5.7384, 5.8669, 5.9830, 6.0888, 6.1860, 6.2758),
        (3.1511, 3.8768, 4.3266, 4.6543, 4.9120, 5.1242, 5.3042, 5.4605, 5.5984, 5.7217, 5.8331, 5.9346, 6.0279, 6.1141),
        (3.1127, 3.8196, 4.2561, 4.5736, 4.8230, 5.0281, 5.2021, 5.3531, 5.4863, 5.6054, 5.7130, 5.8111, 5.9012, 5.9844),
        (3.0813, 3.7729, 4.1987, 4.5077, 4.7502, 4.9496, 5.1187, 5.2653, 5.3946, 5.5102, 5.6146, 5.7098, 5.7973, 5.8780),
        (3.0552, 3.7341, 4.1509, 4.4529, 4.6897, 4.8842, 5.0491, 5.1921, 5.3181, 5.4308, 5.5326, 5.6253, 5.7105, 5.7892),
        (3.0332, 3.7014, 4.1105, 4.4066, 4.6385, 4.8290, 4.9903, 5.1301, 5.2534, 5.3636, 5.4631, 5.5538, 5.6370, 5.7139),
        (3.0143, 3.6734, 4.0760, 4.3670, 4.5947, 4.7816, 4.9399, 5.0770, 5.1979, 5.3059, 5.4034, 5.4923, 5.5739, 5.6493),
        (2.9980, 3.6491, 4.0461, 4.3327, 4.5568, 4.7406, 4.8962, 5.0310, 5.1498, 5.2559, 5.3517, 5.4390, 5.5191, 5.5932),
        (2.9837, 3.6280, 4.0200, 4.3027, 4.5237, 4.7048, 4.8580, 4.9907, 5.1077, 5.2121, 5.3064, 5.3923, 5.4712, 5.5440),
        (2.9712, 3.6093, 3.9970, 4.2763, 4.4944, 4.6731, 4.8243, 4.9552, 5.0705, 5.1735, 5.2664, 5.3511, 5.4288, 5.5006),
        (2.9600, 3.5927, 3.9766, 4.2528, 4.4685, 4.6450, 4.7944, 4.9236, 5.0375, 5.1391, 5.2308, 5.3144, 5.3911, 5.4619),
        (2.9500, 3.5779, 3.9583, 4.2319, 4.4452, 4.6199, 4.7676, 4.8954, 5.0079, 5.1083, 5.1990, 5.2815, 5.3573, 5.4273),
        (2.9188, 3.5317, 3.9013, 4.1663, 4.3727, 4.5413, 4.6838, 4.8069, 4.9152, 5.0119, 5.0991, 5.1785, 5.2514, 5.3186),
        (2.8882, 3.4864, 3.8454, 4.1021, 4.3015, 4.4642, 4.6014, 4.7199, 4.8241, 4.9170, 5.0008, 5.0770, 5.1469, 5.2114),
        (2.8582, 3.4421, 3.7907, 4.0391, 4.2316, 4.3885, 4.5205, 4.6345, 4.7345, 4.8236, 4.9039, 4.9769, 5.0439, 5.1056),
        (2.8288, 3.3987, 3.7371, 3.9774, 4.1632, 4.3141, 4.4411, 4.5504, 4.6463, 4.7317, 4.8085, 4.8783, 4.9422, 5.0011),
        (2.8000, 3.3561, 3.6846, 3.9169, 4.0960, 4.2412, 4.3630, 4.4678, 4.5595, 4.6411, 4.7144, 4.7809, 4.8418, 4.8979),
        (2.7718, 3.3145, 3.6332, 3.8577, 4.0301, 4.1696, 4.2863, 4.3865, 4.4741, 4.5519, 4.6217, 4.6849, 4.7427, 4.7959),
    ),
    0.01: (
        (90.0242, 135.0407, 164.2577, 185.5753, 202.2097, 215.7691, 227.1663, 236.9662, 245.5416, 253.1507, 259.9791, 266.1646, 271.8121, 277.0034),
        (14.0358, 19.0189, 22.2937, 24.7172, 26.6290, 28.2006, 29.5301, 30.6794, 31.6894, 32.5887, 33.3983, 34.1335, 34.8064, 35.4261),
        (8.2603, 10.6185, 12.1695, 13.3243, 14.2407, 14.9978, 15.6410, 16.1990, 16.6908, 17.1299, 17.5261, 17.8866, 18.2171, 18.5219),
        (6.5112, 8.1198, 9.1729, 9.9583, 10.5832, 11.1009, 11.5418, 11.9251, 12.2637, 12.5665, 12.8402, 13.0895, 13.3184, 13.5298),
        (5.7023, 6.9757, 7.8042, 8.4215, 8.9131, 9.3209, 9.6687, 9.9715, 10.2393, 10.4790, 10.6959, 10.8938, 11.0756, 11.2436),
        (5.2431, 6.3305, 7.0333, 7.5560, 7.9723, 8.3177, 8.6125, 8.8693, 9.0966, 9.3003, 9.4847, 9.6530, 9.8077, 9.9508),
        (4.9490, 5.9193, 6.5424, 7.0050, 7.3730, 7.6784, 7.9390, 8.1662, 8.3674, 8.5477, 8.7110, 8.8602, 8.9973, 9.1242),
        (4.7452, 5.6354, 6.2038, 6.6248, 6.9594, 7.2369, 7.4738, 7.6803, 7.8632, 8.0272, 8.1757, 8.3114, 8.4362, 8.5517),
        (4.5960, 5.4280, 5.9567, 6.3473, 6.6574, 6.9145, 7.1339, 7.3251, 7.4945, 7.6463, 7.7839, 7.9096, 8.0253, 8.1323),
        (4.4820, 5.2702, 5.7686, 6.1361, 6.4275, 6.6690, 6.8749, 7.0544, 7.2133, 7.3559, 7.4850, 7.6030, 7.7116, 7.8121),
        (4.3923, 5.1460, 5.6208, 5.9701, 6.2468, 6.4759, 6.6713, 6.8414, 6.9921, 7.1272, 7.2497, 7.3615, 7.4645, 7.5598),
        (4.3198, 5.0459, 5.5016, 5.8363, 6.1011, 6.3202, 6.5069, 6.6696, 6.8136, 6.9426, 7.0596, 7.1665, 7.2648, 7.3558),
        (4.2600, 4.9635, 5.4036, 5.7262, 5.9812, 6.1920, 6.3717, 6.5280, 6.6664, 6.7905, 6.9029, 7.0056, 7.1001, 7.1876),
        (4.2099, 4.8945, 5.3215, 5.6340, 5.8808, 6.0847, 6.2583, 6.4095, 6.5432, 6.6631, 6.7716, 6.8708, 6.9621, 7.0466),
        (4.1673, 4.8359, 5.2518, 5.5558, 5.7956, 5.9936, 6.1621, 6.3087, 6.4384, 6.5547, 6.6600, 6.7562, 6.8447, 6.9266),
        (4.1306, 4.7855, 5.1919, 5.4885, 5.7223, 5.9152, 6.0793, 6.2221, 6.3483, 6.4615, 6.5639, 6.6575, 6.7436, 6.8233),
        (4.0987, 4.7418, 5.1399, 5.4301, 5.6586, 5.8471, 6.0074, 6.1468, 6.2700, 6.3804, 6.4804, 6.5717, 6.6557, 6.7334),
        (4.0707, 4.7034, 5.0942, 5.3788, 5.6028, 5.7874, 5.9443, 6.0807, 6.2013, 6.3093, 6.4071, 6.4964, 6.5785, 6.6546),
        (4.0460, 4.6694, 5.0539, 5.3336, 5.5535, 5.7346, 5.8886, 6.0223, 6.1406, 6.2465, 6.3423, 6.4298, 6.5103, 6.5848),
        (4.0239, 4.6392, 5.0180, 5.2933, 5.5095, 5.6876, 5.8389, 5.9703, 6.0865, 6.1905, 6.2846, 6.3705, 6.4495, 6.5226),
        (3.9555, 4.5456, 4.9068, 5.1684, 5.3735, 5.5420, 5.6850, 5.8092, 5.9187, 6.0168, 6.1054, 6.1864, 6.2608, 6.3296),
        (3.8891, 4.4549, 4.7992, 5.0476, 5.2418, 5.4012, 5.5361, 5.6531, 5.7563, 5.8485, 5.9318, 6.0079, 6.0777, 6.1423),
        (3.8247, 4.3672, 4.6951, 4.9308, 5.1145, 5.2648, 5.3920, 5.5020, 5.5989, 5.6855, 5.7636, 5.8348, 5.9002, 5.9606),
        (3.7622, 4.2822, 4.5944, 4.8178, 4.9913, 5.1330, 5.2525, 5.3558, 5.4466, 5.5276, 5.6007, 5.6672, 5.7282, 5.7845),
        (3.7016, 4.1999, 4.4970, 4.7085, 4.8722, 5.0055, 5.1176, 5.2143, 5.2992, 5.3748, 5.4429, 5.5048, 5.5615, 5.6138),
        (3.6428, 4.1203, 4.4028, 4.6028, 4.7570, 4.8822, 4.9872, 5.0775, 5.1566, 5.2270, 5.2902, 5.3476, 5.4001, 5.4485),
    ),
}


def q_critical(k: int, df: float, alpha: float) -> float:
    """Critical value q(alpha; k, df), interpolating in 1/df on the ladder.

    Raises ValueError outside the table's coverage, naming the supported
    bounds.
    """
    if alpha not in _Q_TABLE:
        raise ValueError(f"alpha {alpha} unsupported; table covers {sorted(_Q_TABLE)}")
    if not K_MIN <= k <= K_MAX:
        raise ValueError(f"group count {k} unsupported; table covers {K_MIN}..{K_MAX}")
    if df < _DF_LADDER[0]:
        raise ValueError(f"df {df} unsupported; table covers df >= {_DF_LADDER[0]}")
    rows = _Q_TABLE[alpha]
    col = k - K_MIN
    if df > _DF_LADDER[-1]:
        return rows[-1][col]
    # Exact ladder hit or interpolation between the bracketing rows.
    for i, ladder_df in enumerate(_DF_LADDER):
        if df == ladder_df:
            return rows[i][col]
        if df < ladder_df:
            lo_df, hi_df = _DF_LADDER[i - 1], ladder_df
            lo_q, hi_q = rows[i - 1][col], rows[i][col]
            w = (1.0 / df - 1.0 / lo_df) / (1.0 / hi_df - 1.0 / lo_df)
            return lo_q + w * (hi_q - lo_q)
    raise AssertionError("unreachable")
