// 271-point lagged-convolution filter for J0/J1 Hankel transforms.
// Abscissae are log-spaced, 30 points per decade on [1e-5, 1e4];
// weights fitted by least squares against closed-form transform pairs.

pub(crate) const FILTER_LOG10_START: f64 = -5.0;
pub(crate) const FILTER_POINTS_PER_DECADE: f64 = 30.0;
pub(crate) const FILTER_LEN: usize = 271;

pub(crate) const FILTER_W0: [f64; FILTER_LEN] = [
    5.35202379923375369e-05, 5.26454379428524825e-05, 5.71231653326555676e-05, 5.11108493179751513e-05,
    5.41934942675521131e-05, 4.89871575866652174e-05, 5.43350251803887129e-05, 5.43588694055722170e-05,
    5.05397446088012517e-05, 5.19037259861536678e-05, 5.16394219293117996e-05, 5.11729132473752758e-05,
    5.14210787691779693e-05, 5.00046578214657946e-05, 5.09591295861145215e-05, 5.01577219229239348e-05,
    4.90413077528814202e-05, 4.97824334049314966e-05, 4.71927677393257518e-05, 4.80591304184553543e-05,
    4.77657469370305654e-05, 4.74039585662062351e-05, 4.66770783731294115e-05, 4.75690873257030090e-05,
    4.44584827635279183e-05, 4.52076420096897712e-05, 4.32180955234964329e-05, 4.27104632489774431e-05,
    4.22951823520399358e-05, 4.11143970539023975e-05, 3.93802927347694208e-05, 3.92845507062902338e-05,
    3.75739152230055034e-05, 3.61250226323909265e-05, 3.47463166972907835e-05, 3.32796478410259802e-05,
    3.17185843960348973e-05, 3.00591805825830104e-05, 2.82984877136624543e-05, 2.64334221993620013e-05,
    2.44623434731403957e-05, 2.23805781747225211e-05, 2.01904979211800712e-05, 1.78904107728100942e-05,
    1.54828671995394106e-05, 1.29696304464975014e-05, 1.03567978394551743e-05, 7.65216871457037758e-06,
    4.86496878700774142e-06, 2.01196002045876384e-06, -8.92641761645444095e-07, -3.82230003266271427e-06,
    -6.75191022165467114e-06, -9.64452204595670675e-06, -1.24592761570489264e-05, -1.51443159842810341e-05,
    -1.76394953519213042e-05, -1.98715890448945940e-05, -2.17609251435129671e-05, -2.32057761729248611e-05,
    -2.40933744933096415e-05, -2.42931792726295843e-05, -2.36549218215861736e-05, -2.20124499764709253e-05,
    -1.91717599139428440e-05, -1.49184581236597982e-05, -9.02105448733595580e-06, -1.21800236552483689e-06,
    8.77256675784301217e-06, 2.12496731876106899e-05, 3.65297288739852919e-05, 5.49395212776659946e-05,
    7.68101155038954884e-05, 1.02463431191123346e-04, 1.32198979218070545e-04, 1.66282258521103360e-04,
    2.04914139808924092e-04, 2.48212200339451993e-04, 2.96182023824284970e-04, 3.48680634006349782e-04,
    4.05379382871757610e-04, 4.65739634807644338e-04, 5.28968098452381767e-04, 5.93999583592851998e-04,
    6.59483003070643228e-04, 7.23788242515033828e-04, 7.85050815399906477e-04, 8.41249227714658404e-04,
    8.90335767827207000e-04, 9.30437856867990403e-04, 9.60117517710826923e-04, 9.78693876214893491e-04,
    9.86636424388311539e-04, 9.85968796837983878e-04, 9.80648165193337504e-04, 9.76843927815150472e-04,
    9.83001181948513821e-04, 1.00957165849865178e-03, 1.06828280764243713e-03, 1.17083606720899225e-03,
    1.32701267642818281e-03, 1.54227909806445209e-03, 1.81519097246897422e-03, 2.13513140378464002e-03,
    2.48115365480774952e-03, 2.82286745796433850e-03, 3.12422961034212760e-03, 3.35069960287550338e-03,
    3.47932366688772504e-03, 3.50999336204917134e-03, 3.47458075431243555e-03, 3.43946229599688229e-03,
    3.49693529976795011e-03, 3.74310220243343319e-03, 4.24443015113966024e-03, 5.00181974571855398e-03,
    5.92737721705298426e-03, 6.85135563190629546e-03, 7.57065464207195508e-03, 7.93380081939703760e-03,
    7.93388719989198549e-03, 7.76123977444786572e-03, 7.76728465256487123e-03, 8.32254333940297270e-03,
    9.61179821941880209e-03, 1.14712842907678473e-02, 1.33912709131430285e-02, 1.47451232907473001e-02,
    1.51692302495927966e-02, 1.48778781249339839e-02, 1.46637435185775922e-02, 1.54830915666662218e-02,
    1.78103157835391712e-02, 2.11872793434599305e-02, 2.43703934946508938e-02, 2.61172294694398399e-02,
    2.61473017791891173e-02, 2.55456327634995921e-02, 2.61540792320127807e-02, 2.92297550700746610e-02,
    3.43285649843359658e-02, 3.93896740407668894e-02, 4.21779156145645970e-02, 4.21108703978981258e-02,
    4.09816352662586356e-02, 4.17708518985292557e-02, 4.62577918571753371e-02, 5.33044529262183819e-02,
    5.94003422278057275e-02, 6.13221324785952829e-02, 5.88861771065337658e-02, 5.54014496673331872e-02,
    5.51208298052126011e-02, 5.95303415379908399e-02, 6.55696471645685480e-02, 6.75687468079512049e-02,
    6.16551966922132336e-02, 4.90916180451084760e-02, 3.55320340604294710e-02, 2.63861467565842667e-02,
    2.18717209305509010e-02, 1.60217488739390762e-02, 1.02257052414211902e-03, -2.61311743215796172e-02,
    -6.00137802185152780e-02, -8.96024304622531631e-02, -1.05925862122059566e-01, -1.08553571540986035e-01,
    -1.05118292809228631e-01, -1.03270949475668700e-01, -1.01128542583176897e-01, -8.49834513491601745e-02,
    -3.86944046533533800e-02, 4.00575828971690973e-02, 1.28902115844208714e-01, 1.86535141022820594e-01,
    1.75690739753188274e-01, 9.01443365954400222e-02, -3.38514348773637369e-02, -1.33564243163290852e-01,
    -1.56501844071516905e-01, -9.44707570158881543e-02, 9.63839612417514112e-03, 8.94360994709840346e-02,
    9.91990505268519063e-02, 4.33927885693527471e-02, -2.99807617981456449e-02, -6.69276147938527161e-02,
    -4.70674074227062367e-02, 4.82666127045649519e-03, 4.28659253546813876e-02, 3.86403801780063200e-02,
    2.30983567860206657e-03, -3.01349084407677367e-02, -3.05386056695026650e-02, -2.69448217005079788e-03,
    2.40351205610783575e-02, 2.42360453655576583e-02, 4.34149329816011301e-04, -2.12868723030401885e-02,
    -1.88876911817768001e-02, 3.19858081498487073e-03, 1.99430002171862020e-02, 1.34446356581697721e-02,
    -7.62129445031659893e-03, -1.84823258899459997e-02, -7.07410689898155948e-03, 1.20248962295910963e-02,
    1.54075889603948000e-02, -4.50384038599189671e-04, -1.48944271175337796e-02, -9.46513481001949944e-03,
    8.10284237108660141e-03, 1.40489639154871854e-02, 6.19167990645942343e-04, -1.31085677143018622e-02,
    -7.78157309254166960e-03, 8.53463885648555673e-03, 1.17596326135195293e-02, -2.66060813048617749e-03,
    -1.25595525036673508e-02, -2.75021988417758524e-03, 1.10763204340544597e-02, 6.80093582404546135e-03,
    -8.40762219183640094e-03, -9.30467411747312040e-03, 5.42785289279302564e-03, 1.05316822608931254e-02,
    -2.71717540281796871e-03, -1.08895205580021529e-02, 5.70799674670278284e-04, 1.07315470971756990e-02,
    9.80817192287212342e-04, -1.03951231394174698e-02, -1.94741071599827988e-03, 1.00666357459886398e-02,
    2.39664073335826410e-03, -9.83982104507167936e-03, -2.39902161765960693e-03, 9.72716275262011827e-03,
    2.03203362414511660e-03, -9.70751115442417337e-03, -1.35163889568881961e-03, 9.70755708543093003e-03,
    4.52827863349188411e-04, -9.67432076395082115e-03, 5.56341186954318473e-04, 9.57261084751436994e-03,
    -1.51834829336889264e-03, -9.43415682997516582e-03, 2.22541748378982628e-03, 9.37702099864291642e-03,
    -2.39659566602994090e-03, -9.57268789550808075e-03, 1.58056344365306925e-03, 1.00572515889966532e-02,
    1.05403885623775451e-03, -1.00004040563907663e-02, -6.63503430694197850e-03, 5.48623123316470222e-03,
    1.26266823912499025e-02, 1.12016675234801188e-02, 6.30631505052532855e-03, 2.51040618961379620e-03,
    7.35580398236914475e-04, 1.61210748994329133e-04, 2.65406702132619230e-05, 3.27382779919297702e-06,
    3.00361653787167079e-07, 2.02733048758027322e-08, 9.92721232313500675e-10,
];

pub(crate) const FILTER_W1: [f64; FILTER_LEN] = [
    -4.15524508258927690e-04, -3.42311030512456801e-04, -2.73856188294438474e-04, -2.11983946752077241e-04,
    -1.50436508440957896e-04, -1.00175592519820706e-04, -5.09973868892559022e-05, -6.52927023365808215e-06,
    3.47993207338396235e-05, 7.18838712874104817e-05, 1.07150669168743721e-04, 1.38011065345960092e-04,
    1.66686995199630207e-04, 1.92340835124850504e-04, 2.15213166599092609e-04, 2.36137198684950524e-04,
    2.54320728579569659e-04, 2.70330612329745769e-04, 2.84850826519934429e-04, 2.96889661280267682e-04,
    3.07080881369280667e-04, 3.15610855130873361e-04, 3.22084469075081987e-04, 3.27022640294703597e-04,
    3.30087051837138165e-04, 3.31256838012044565e-04, 3.31580439378177769e-04, 3.29173471778474347e-04,
    3.26117921152598218e-04, 3.20879764008552863e-04, 3.13984272583962246e-04, 3.05796288914290384e-04,
    2.95301173749092137e-04, 2.84167089878389987e-04, 2.70560372193923235e-04, 2.55724310248300500e-04,
    2.38607383412794733e-04, 2.19766357639245675e-04, 1.99635960664843555e-04, 1.76614206173618827e-04,
    1.52914134629074470e-04, 1.26747526158931553e-04, 9.89181885202568365e-05, 6.86827800837859557e-05,
    3.69208541918391203e-05, 3.39784910092150125e-06, -3.20997993324681138e-05, -6.95259836726530123e-05,
    -1.08302024443402496e-04, -1.48596296260801127e-04, -1.90321537493540747e-04, -2.33196152969755862e-04,
    -2.76831029582077517e-04, -3.21266667478344796e-04, -3.65725937633750169e-04, -4.10064737370100657e-04,
    -4.53377959684101101e-04, -4.95548683466760786e-04, -5.35274395523541949e-04, -5.72398223419889364e-04,
    -6.05445074405401139e-04, -6.33915845002070138e-04, -6.56402063099220234e-04, -6.71949293229144552e-04,
    -6.79216451420991147e-04, -6.77091198771066338e-04, -6.64151133094657451e-04, -6.39168495926252175e-04,
    -6.01070030525008075e-04, -5.48802262513603881e-04, -4.81646639010237373e-04, -3.99117500392036232e-04,
    -3.01293405011781386e-04, -1.88715125324691866e-04, -6.25854600704120088e-05, 7.48580941216670783e-05,
    2.20445413944442086e-04, 3.70386551187059103e-04, 5.19003225565151495e-04, 6.60371928402226282e-04,
    7.86731607308610668e-04, 8.89473326634638607e-04, 9.61137789084041527e-04, 9.91411367506861083e-04,
    9.73306771083107258e-04, 8.99205138828585923e-04, 7.66524910728678651e-04, 5.74011451272275113e-04,
    3.28070904540070634e-04, 3.77132025251134158e-05, -2.77978855791556775e-04, -5.94161599088784825e-04,
    -8.81175990120009953e-04, -1.10396534282850532e-03, -1.22847751724803212e-03, -1.22350719185957335e-03,
    -1.06959401331825979e-03, -7.63493324269699271e-04, -3.26376336712820786e-04, 1.97434211781206959e-04,
    7.33532979998639811e-04, 1.19068807903405412e-03, 1.47174092899183314e-03, 1.49194771386899645e-03,
    1.20764720671725232e-03, 6.39206291163417505e-04, -1.18523916430780048e-04, -8.95361580615559871e-04,
    -1.47576217434427755e-03, -1.65706671697576826e-03, -1.31822950734951155e-03, -4.89592176355477704e-04,
    6.12178392359110377e-04, 1.61871574847682496e-03, 2.12254729324276928e-03, 1.84669506549941598e-03,
    8.12757140708266976e-04, -5.85327072344047489e-04, -1.68688822792809143e-03, -1.85204034302812685e-03,
    -8.34801772115659419e-04, 9.68815375592949144e-04, 2.61046836473690595e-03, 3.07571949014096187e-03,
    1.96206197968505202e-03, -9.33375549846044740e-05, -1.64961201764568695e-03, -1.38557630178250254e-03,
    8.35609225483318610e-04, 3.62098431178731455e-03, 4.92447535224210548e-03, 3.69319703259678514e-03,
    9.78950612376561918e-04, -6.50920140266547653e-04, 7.64542719625408741e-04, 4.64324174444318699e-03,
    8.05178591167848672e-03, 8.25123612702620933e-03, 5.45803071438900368e-03, 3.02915712001840341e-03,
    4.44849368223548293e-03, 9.76030484559626751e-03, 1.51381518697969748e-02, 1.65089177194414245e-02,
    1.39025188537111218e-02, 1.19055074552348907e-02, 1.52071270045320266e-02, 2.35113422743227843e-02,
    3.13754041750947954e-02, 3.37578343775840270e-02, 3.17346229555820480e-02, 3.19536050941774744e-02,
    3.97176318969676284e-02, 5.28360386876939453e-02, 6.33377149939315098e-02, 6.59317324325526394e-02,
    6.42273248916632039e-02, 6.73286576694005073e-02, 7.97035183867702696e-02, 9.52370405347033461e-02,
    1.02662426458879130e-01, 9.72566334486794359e-02, 8.60886817189243370e-02, 8.02675414024892342e-02,
    8.17361842513583403e-02, 7.90053345727453754e-02, 5.76239148652938904e-02, 1.54617644623601912e-02,
    -3.32819935420745339e-02, -7.05957565220616950e-02, -9.14463525417899270e-02, -1.06662796189161579e-01,
    -1.26898259726809653e-01, -1.43107566293439931e-01, -1.26048042827475670e-01, -5.15780827980031956e-02,
    6.75799924059218293e-02, 1.74863331911638137e-01, 2.02289235889923313e-01, 1.22609253679241997e-01,
    -2.10123983759271590e-02, -1.37823364714588031e-01, -1.53499583289810088e-01, -6.66938123376360353e-02,
    4.96226042560687294e-02, 1.06511891590041693e-01, 7.02147064135584115e-02, -1.44046491213697565e-02,
    -6.83744101242788616e-02, -5.03875920993861331e-02, 1.02740341342488477e-02, 4.88551729516605651e-02,
    3.13183604839787355e-02, -1.54146352077050783e-02, -3.78572690148230029e-02, -1.52767472692087163e-02,
    2.11879447224306502e-02, 2.83135128208716717e-02, 1.25950868074093444e-03, -2.41083249162829250e-02,
    -1.72694265079608653e-02, 1.02762856828376749e-02, 2.21964999683941372e-02, 4.64702277365307281e-03,
    -1.74097912105078030e-02, -1.47706092858719447e-02, 7.34874554758890158e-03, 1.79191389501234082e-02,
    3.23386497642697002e-03, -1.49624085107749535e-02, -1.10020710845938324e-02, 8.37311644299430086e-03,
    1.45784943063890469e-02, -8.34305866502383763e-04, -1.42176530986141240e-02, -5.64318621022767350e-03,
    1.10908486095154940e-02, 1.00268496188864031e-02, -6.60169605014600432e-03, -1.21387753837353639e-02,
    1.92742537788030341e-03, 1.23467248430443391e-02, 2.17357676673591953e-03, -1.12533210763908452e-02,
    -5.34743496924670447e-03, 9.45727144562744093e-03, 7.54882887065626111e-03, -7.43844661794910034e-03,
    -8.91008712357755674e-03, 5.51866183743133544e-03, 9.64159606419949869e-03, -3.88870867861933070e-03,
    -9.94313734021047210e-03, 2.62056618369220680e-03, 9.99286986149844694e-03, -1.73021646500502724e-03,
    -9.90992120914526743e-03, 1.18301589883784957e-03, 9.77899754781570013e-03, -9.34182272623820852e-04,
    -9.63828585314391653e-03, 9.18794469155424700e-04, 9.50413759536942321e-03, -1.05713528864425786e-03,
    -9.38451148026986717e-03, 1.24901196374541286e-03, 9.29404584821049047e-03, -1.36372567965367089e-03,
    -9.26412544632566545e-03, 1.22241730017483546e-03, 9.33227347490774191e-03, -5.59176953115899126e-04,
    -9.47778979373037345e-03, -1.04006239131133383e-03, 9.39123908438179583e-03, 4.14656537277364925e-03,
    -7.82931956623239209e-03, -8.83496410534495569e-03, 1.46478166443741596e-03, 1.07129018113773511e-02,
    1.19817505067146349e-02, 7.99740119967598355e-03, 3.73561928964774104e-03, 1.28869755672202427e-03,
    3.35607802930419663e-04, 6.64904306515363047e-05, 1.00197743019899130e-05, 1.14240428199259368e-06,
    9.76539604317383670e-08, 6.18268103700735658e-09, 2.85640772728113961e-10,
];
