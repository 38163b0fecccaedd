"""Reference parameter counts and success rates, keyed by (x, y, z)."""

TABLE1_P = {2: 1, 3: 6, 4: 15, 5: 28, 6: 45, 7: 66, 8: 91}
TABLE1_RATE = {2: 100.0, 3: 81.9, 4: 96.6, 5: 49.3, 6: 67.9, 7: 24.0, 8: 48.5}


def _cells(d, rows):
    out = {}
    for (x, y), vals in rows.items():
        for z, v in enumerate(vals, start=1):
            out[(x, y, z)] = v
    return out


D5_P = _cells(5, {
    (1, 1): [8], (2, 1): [12], (2, 2): [16, 20], (3, 1): [16], (3, 2): [20, 24], (3, 3): [24, 28, 32],
    (4, 1): [20], (4, 2): [24, 28], (4, 3): [28, 32, 36], (4, 4): [32, 36, 40, 44],
})
D5_RATE = _cells(5, {
    (1, 1): [100.0], (2, 1): [100.0], (2, 2): [100.0, 96.4], (3, 1): [100.0], (3, 2): [92.0, 35.7],
    (3, 3): [68.3, 38.0, 29.0], (4, 1): [99.0], (4, 2): [56.2, 37.0], (4, 3): [55.8, 31.8, 21.8],
    (4, 4): [37.4, 20.1, 14.9, 9.7],
})
# bold (critical) and underlined (overdetermined) cells
D5_CRITICAL = {(3, 3, 2), (4, 2, 2), (4, 3, 1)}
D5_OVER = {(3, 3, 3), (4, 3, 2), (4, 3, 3), (4, 4, 1), (4, 4, 2), (4, 4, 3), (4, 4, 4)}

D7_P = _cells(7, {
    (1, 1): [12], (2, 1): [18], (2, 2): [24, 30], (3, 1): [24], (3, 2): [30, 36], (3, 3): [36, 42, 48],
    (4, 1): [30], (4, 2): [36, 42], (4, 3): [42, 48, 54], (4, 4): [48, 54, 60, 66],
    (5, 1): [36], (5, 2): [42, 48], (5, 3): [48, 54, 60], (5, 4): [54, 60, 66, 72],
    (5, 5): [60, 66, 72, 78, 84], (6, 1): [42], (6, 2): [48, 54], (6, 3): [54, 60, 66],
    (6, 4): [60, 66, 72, 78], (6, 5): [66, 72, 78, 84, 90], (6, 6): [72, 78, 84, 90, 96, 102],
})

D6_P = _cells(6, {
    (1, 1): [10], (2, 1): [15], (2, 2): [20, 25], (3, 1): [20], (3, 2): [25, 30], (3, 3): [30, 35, 40],
    (4, 1): [25], (4, 2): [30, 35], (4, 3): [35, 40, 45], (4, 4): [40, 45, 50, 55],
    (5, 1): [30], (5, 2): [35, 40], (5, 3): [40, 45, 50], (5, 4): [45, 50, 55, 60],
    (5, 5): [50, 55, 60, 65, 70],
})
D6_RATE = _cells(6, {
    (1, 1): [100.00], (2, 1): [100.00], (2, 2): [100.00, 100.00], (3, 1): [100.00],
    (3, 2): [99.95, 100.00], (3, 3): [99.42, 39.03, 0.00], (4, 1): [100.00], (4, 2): [92.92, 44.84],
    (4, 3): [12.97, 0.00, 0.00], (4, 4): [0.74, 0.00, 0.00, 0.00], (5, 1): [95.40], (5, 2): [76.71, 10.96],
    (5, 3): [1.47, 0.00, 0.00], (5, 4): [0.00, 0.00, 0.00, 0.00], (5, 5): [0.00, 0.00, 0.00, 0.00, 0.00],
})
D6_CRITICAL = {(4, 3, 3), (4, 4, 2), (5, 3, 2), (5, 4, 1)}
D6_OVER = {(4, 4, 3), (4, 4, 4), (5, 3, 3), (5, 4, 2), (5, 4, 3), (5, 4, 4),
           (5, 5, 1), (5, 5, 2), (5, 5, 3), (5, 5, 4), (5, 5, 5)}
