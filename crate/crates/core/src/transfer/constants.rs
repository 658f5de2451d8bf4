//! Embedded high-precision constants: Euler's γ and ζ(2..=17), 72 significant digits.

pub const EULER_GAMMA: &str = "0.577215664901532860606512090082402431042159335939923598805767234884867727";

/// `ZETA[i]` is ζ(i + 2).
pub const ZETA: [&str; 16] = [
    "1.64493406684822643647241516664602518921894990120679843773555822937000747",
    "1.20205690315959428539973816151144999076498629234049888179227155534183821",
    "1.08232323371113819151600369654116790277475095191872690768297621544412062",
    "1.03692775514336992633136548645703416805708091950191281197419267790380359",
    "1.01734306198444913971451792979092052790181749003285356184240866400433218",
    "1.00834927738192282683979754984979675959986356056523870641728313657160148",
    "1.00407735619794433937868523850865246525896079064985002032911020265258295",
    "1.00200839282608221441785276923241206048560585139488875654859661590978505",
    "1.00099457512781808533714595890031901700601953156447751725778899463629147",
    "1.00049418860411946455870228252646993646860643575820861711914143610005406",
    "1.00024608655330804829863799804773967096041608845800340453304095213325202",
    "1.00012271334757848914675183652635739571427510589550984513670267162089673",
    "1.00006124813505870482925854510513533374748169616915454948275520225286294",
    "1.00003058823630702049355172851064506258762794870685817750656993289333227",
    "1.00001528225940865187173257148763672202323738899047153115310520358878709",
    "1.00000763719763789976227360029356302921308824909026267909537984397293564",
];
