//! Reference factors `b_d` shared by the integration tests.
#![allow(dead_code)]

use cmdyn::poly::IntPoly;

/// `(n, d, b_d)` for every factor of `P_n`, `n <= 5`, other than `x` and `x + 1`.
pub const SMALL_PERIODS: &[(u32, u64, &str)] = &[
    (1, 7, "x^2-x+2"),
    (2, 15, "x^4-4x^3+5x^2-2x+4"),
    (3, 23, "x^6+x^5+9x^4-13x^3+18x^2-16x+8"),
    (3, 31, "x^6+7x^5+11x^4-15x^3+16x^2-20x+8"),
    (4, 39, "x^8-6x^7+42x^6-60x^5+53x^4-54x^3+24x^2+16"),
    (4, 55, "x^8+6x^7+78x^6-84x^5+53x^4-66x^3-12x^2+24x+16"),
    (4, 63, "x^8+20x^7+110x^6-100x^5+49x^4-80x^3-40x^2+40x+16"),
    (5, 47, "x^10-15x^9+74x^8-90x^7+93x^6-187x^5+160x^4-156x^3+168x^2-48x+32"),
    (5, 79, "x^10-31x^9+290x^8-186x^7+5x^6-251x^5-56x^4-60x^3+256x^2+32x+32"),
    (5, 103, "x^10-21x^9+732x^8-290x^7-191x^6-369x^5-502x^4+40x^3+456x^2+144x+32"),
    (5, 127, "x^10+77x^9+1730x^8-366x^7-643x^6-647x^5-1496x^4+120x^3+904x^2+320x+32"),
    (5, 119, "x^20+22x^19+1177x^18-7012x^17+27294x^16-72516x^15+149882x^14-227360x^13+282149x^12-253514x^11+152221x^10-21772x^9-74372x^8+82952x^7-49328x^6-11392x^5+26304x^4-18816x^3+8448x^2+5632x+1024"),
];

/// `(d, b_d)` for the factors of `P_6`.
pub const PERIOD_6: &[(u64, &str)] = &[
    (87, "x^12+16x^11+395x^10+398x^9-357x^8-316x^7-155x^6-1058x^5+1332x^4-704x^3+800x^2-352x+64"),
    (135, "x^12-36x^11+2271x^10+1586x^9-1689x^8-1800x^7-2527x^6-2310x^5+2664x^4+832x^3+1296x^2-288x+64"),
    (175, "x^12-166x^11+8027x^10+5200x^9-5565x^8-6446x^7-9659x^6-6172x^5+6540x^4+5600x^3+2672x^2-32x+64"),
    (207, "x^12-262x^11+20035x^10+13096x^9-13397x^8-15878x^7-24435x^6-14516x^5+14372x^4+15128x^3+5440x^2+416x+64"),
    (247, "x^12+184x^11+57491x^10+39206x^9-36669x^8-44260x^7-70067x^6-41690x^5+37644x^4+43072x^3+13616x^2+1472x+64"),
    (231, "x^24-160x^23+39806x^22-404188x^21+1735295x^20-4082916x^19+6591016x^18-7995792x^17+7025423x^16-3646952x^15-2986282x^14+8218276x^13-7410127x^12+8124428x^11-590812x^10-4737592x^9+2208800x^8-5462688x^7+644992x^6+672768x^5+631808x^4+875008x^3+496640x^2+53248x+4096"),
    (255, "x^24+484x^23+67682x^22-315500x^21+1778351x^20-3320880x^19+7580476x^18-12603888x^17+15479855x^16-14728444x^15+4226978x^14+12258548x^13-20944063x^12+22569256x^11-11161888x^10-5859992x^9+9241280x^8-9494496x^7+2773504x^6+2227200x^5-1364224x^4+780800x^3+708608x^2+100352x+4096"),
];

/// `(d, b_d)` for the factors of `P_7` of degree 14 and 28.
pub const PERIOD_7: &[(u64, &str)] = &[
    (71, "x^14-11x^13+195x^12-127x^11+473x^10-593x^9+489x^8-1285x^7+1858x^6-2880x^5+3320x^4-2656x^3+1792x^2-576x+128"),
    (151, "x^14+49x^13+3947x^12+5049x^11+1257x^10-3585x^9-9591x^8-3357x^7-2286x^6+756x^5+9648x^4-5760x^3+5152x^2-1280x+128"),
    (223, "x^14+327x^13+31533x^12+49475x^11+3971x^10-38331x^9-67753x^8-48623x^7-10688x^6+36240x^5+40216x^4-4912x^3+10848x^2-2304x+128"),
    (343, "x^14+553x^13+519827x^12+864297x^11+22281x^10-724017x^9-1048551x^8-982269x^7-51534x^6+722988x^5+532728x^4+113904x^3+33376x^2-3584x+128"),
    (463, "x^14-4317x^13+5455509x^12+9135083x^11+165107x^10-7744779x^9-10913545x^8-10577543x^7-330800x^6+7742148x^5+5462032x^4+1438400x^3+169824x^2+2880x+128"),
    (487, "x^14-2219x^13+8414699x^12+14095377x^11+268377x^10-11932257x^9-16807911x^8-16325397x^7-513342x^6+11923632x^5+8397216x^4+2225952x^3+249088x^2+6784x+128"),
    (287, "x^28+718x^27+151595x^26+302396x^25-1969799x^24+13310626x^23+49478315x^22-92763048x^21+15572619x^20-55567582x^19-49236615x^18+258472956x^17-25184053x^16+97253374x^15-160085295x^14-143847472x^13-97023632x^12+31900208x^11+170255840x^10-28494624x^9+144550336x^8-146641664x^7+52719360x^6-60307968x^5+31151104x^4-7360512x^3+3829760x^2-466944x+16384"),
    (391, "x^28-910x^27+1396079x^26-11190416x^25+45948277x^24-124180050x^23+235719087x^22-328250004x^21+304829895x^20-37280970x^19-363512763x^18+751810392x^17-807755041x^16+585000802x^15+57581533x^14-421649716x^13+537990116x^12-439254264x^11-53209920x^10-5224128x^9-124251648x^8-70235136x^7+180393984x^6-52199424x^5+110334976x^4+18845696x^3+8744960x^2-401408x+16384"),
    (511, "x^28+6614x^27+12795083x^26-81961412x^25+295814809x^24-919556958x^23+2515624107x^22-3835223880x^21+2741257515x^20-318564558x^19-3878860743x^18+9526335516x^17-6276227797x^16+3048095422x^15+1197209809x^14-7865407120x^13+4568895824x^12-2187610536x^11+217110912x^10+2125718976x^9-1951319616x^8+601344x^7-39389184x^6+61917696x^5+688675840x^4+309923840x^3+42622976x^2+1515520x+16384"),
];

pub fn poly(s: &str) -> IntPoly {
    s.parse().unwrap_or_else(|e| panic!("{s}: {e}"))
}

/// Every `(d, b_d)` with period at most 6.
pub fn through_period_6() -> Vec<(u64, IntPoly)> {
    SMALL_PERIODS.iter().map(|&(_, d, s)| (d, poly(s))).chain(PERIOD_6.iter().map(|&(d, s)| (d, poly(s)))).collect()
}
